"""Self-consistency residuals of the semiclassical Einstein equation.

The residual at an event is the component-wise sup norm
|G_mn - 8 pi <T_mn>|; a state/backend pair is self-consistent on a grid
when the global maximum vanishes.  Scaling studies certify how residuals
decay as a volume parameter grows (log-log slope), and a golden-section
search fits a scalar parameter (such as the field mass) by minimizing the
residual over a reference grid.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from math import isfinite, sqrt
from typing import Callable, Sequence

import numpy as np

from .spacetime import Event, einstein_tensor
from .stress_energy import stress_sample

__all__ = [
    "ResidualReport",
    "ScalingStudy",
    "FitResult",
    "residual",
    "scaling_study",
    "fit_parameter",
]

EIGHT_PI = 8.0 * np.pi


@dataclass(frozen=True)
class ResidualReport:
    """Per-event and global sup-norm residuals of G = 8 pi T."""

    events: tuple[Event, ...]
    per_event: tuple[float, ...]
    global_max: float
    parameters: dict = field(default_factory=dict)


def residual(backend, state, basis, events: Sequence[Event],
             parameters: dict | None = None) -> ResidualReport:
    """Max-component |G_mn - 8 pi <T_mn>| at each event plus the global max."""
    events = tuple(events)
    if not events:
        raise ValueError("residual needs a nonempty event grid")
    per = []
    for ev in events:
        g = einstein_tensor(backend, ev).matrix
        t = stress_sample(state, basis, backend, ev).components.matrix
        per.append(float(np.abs(g - EIGHT_PI * t).max()))
    return ResidualReport(
        events=events,
        per_event=tuple(per),
        global_max=max(per),
        parameters=dict(parameters or {}),
    )


@dataclass(frozen=True)
class ScalingStudy:
    """Observable sampled over a growing parameter, with log-log slope."""

    parameter: str
    values: tuple[float, ...]
    observables: tuple[float, ...]
    slope: float | None
    status: str  # "ok" or "undefined(zero)"

    def rows(self) -> list[tuple[float, float]]:
        return list(zip(self.values, self.observables))


def scaling_study(observable: Callable[[float], float], values: Sequence[float],
                  parameter: str = "V") -> ScalingStudy:
    """Evaluate ``observable`` over ``values`` and fit a log-log slope.

    Requires at least three strictly increasing positive values.  A zero
    observable anywhere makes the log-log fit degenerate; the slope is then
    None with status "undefined(zero)".
    """
    values = tuple(float(v) for v in values)
    if len(values) < 3:
        raise ValueError("scaling study needs at least 3 parameter values")
    if any(b <= a for a, b in zip(values, values[1:])):
        raise ValueError("parameter values must be strictly increasing")
    if values[0] <= 0.0:
        raise ValueError("parameter values must be positive")
    obs = tuple(float(observable(v)) for v in values)
    if any(o == 0.0 for o in obs):
        return ScalingStudy(parameter, values, obs, None, "undefined(zero)")
    slope = float(np.polyfit(np.log(values), np.log(np.abs(obs)), 1)[0])
    return ScalingStudy(parameter, values, obs, slope, "ok")


@dataclass(frozen=True)
class FitResult:
    parameter: float
    value: float
    hit_boundary: bool


_INV_PHI = (sqrt(5.0) - 1.0) / 2.0


def fit_parameter(objective: Callable[[float], float], lo: float, hi: float,
                  tol: float = 1e-8) -> FitResult:
    """Golden-section minimization of a 1-D objective on [lo, hi].

    Returns the interior minimizer to within ``tol`` in the parameter; if
    either bracket end beats the interior point the end is returned with
    ``hit_boundary`` set.  A non-finite objective value raises ValueError.
    """
    if not (lo < hi):
        raise ValueError("bracket must satisfy lo < hi")
    if not (tol > 0.0):
        raise ValueError("tol must be positive")

    def f(x: float) -> float:
        v = float(objective(x))
        if not isfinite(v):
            raise ValueError(f"objective is not finite at parameter {x!r}")
        return v

    f_lo, f_hi = f(lo), f(hi)
    a, b = lo, hi
    c = b - _INV_PHI * (b - a)
    d = a + _INV_PHI * (b - a)
    f_c, f_d = f(c), f(d)
    while (b - a) > tol:
        if f_c <= f_d:
            b, d, f_d = d, c, f_c
            c = b - _INV_PHI * (b - a)
            f_c = f(c)
        else:
            a, c, f_c = c, d, f_d
            d = a + _INV_PHI * (b - a)
            f_d = f(d)
    best_x = 0.5 * (a + b)
    best_f = f(best_x)
    # a monotone objective means the bracket excluded the true minimum
    if f_lo < best_f or f_hi < best_f:
        if f_lo <= f_hi:
            return FitResult(parameter=lo, value=f_lo, hit_boundary=True)
        return FitResult(parameter=hi, value=f_hi, hit_boundary=True)
    return FitResult(parameter=best_x, value=best_f, hit_boundary=False)
