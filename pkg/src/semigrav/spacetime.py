"""Fixed background spacetimes: metrics, Einstein tensors, and light cones.

Three backgrounds are supported, each with closed-form curvature so that
no numerical relativity is ever needed:

* ``Minkowski``     -- flat space in a periodic box of side L, d spatial dims.
* ``EinsteinDeSitter`` -- spatially flat matter-dominated cosmology with
  scale factor a(t) = t^(2/3), valid for t > 0.
* ``Rindler2D``     -- the right wedge of 2-D Minkowski space in conformal
  coordinates (tau, xi), metric e^(2 a xi) diag(1, -1).

Signature convention is (+, -, ..., -) throughout.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Union

import numpy as np

__all__ = [
    "BackendDomainError",
    "Minkowski",
    "EinsteinDeSitter",
    "Rindler2D",
    "Backend",
    "Event",
    "TensorSample",
    "metric",
    "einstein_tensor",
    "comoving_volume_element",
    "outside_future_cone",
]


class BackendDomainError(ValueError):
    """Raised when an event lies outside a backend's coordinate domain."""


@dataclass(frozen=True)
class Minkowski:
    """Flat spacetime with periodic spatial box of side ``box_side``."""

    dimension: int = 3
    box_side: float = 10.0

    def __post_init__(self):
        if self.dimension < 1:
            raise BackendDomainError("dimension must be >= 1")
        if not (self.box_side > 0.0):
            raise BackendDomainError("box_side must be positive")

    @property
    def spatial_volume(self) -> float:
        return self.box_side**self.dimension


@dataclass(frozen=True)
class EinsteinDeSitter:
    """Matter-dominated flat FRW background, a(t) = t^(2/3), t > 0.

    ``comoving_volume`` is the fiducial comoving box V0; the proper volume
    element at time t is V0 * t^2.
    """

    comoving_volume: float

    def __post_init__(self):
        if not (self.comoving_volume > 0.0):
            raise BackendDomainError("comoving_volume must be positive")

    @property
    def dimension(self) -> int:
        return 3


@dataclass(frozen=True)
class Rindler2D:
    """Right Rindler wedge in conformal coordinates, proper acceleration ``a``."""

    acceleration: float

    def __post_init__(self):
        if not (self.acceleration > 0.0):
            raise BackendDomainError("acceleration must be positive")

    @property
    def dimension(self) -> int:
        return 1


Backend = Union[Minkowski, EinsteinDeSitter, Rindler2D]


@dataclass(frozen=True)
class Event:
    """A spacetime point: coordinate time plus a spatial coordinate tuple."""

    t: float
    x: tuple[float, ...]

    def __post_init__(self):
        object.__setattr__(self, "x", tuple(float(c) for c in self.x))

    @property
    def dimension(self) -> int:
        return len(self.x)


class TensorSample:
    """A symmetric rank-2 tensor sampled at one event (components mu,nu)."""

    __slots__ = ("matrix",)

    def __init__(self, matrix):
        m = np.asarray(matrix, dtype=float)
        if m.ndim != 2 or m.shape[0] != m.shape[1]:
            raise ValueError("tensor sample must be a square matrix")
        if not np.allclose(m, m.T, rtol=0.0, atol=1e-12 * (1.0 + np.abs(m).max())):
            raise ValueError("tensor sample must be symmetric")
        # store the exactly symmetric part; asymmetry beyond tolerance was rejected
        self.matrix = 0.5 * (m + m.T)
        self.matrix.setflags(write=False)

    def __getitem__(self, index: tuple[int, int]) -> float:
        mu, nu = index
        return float(self.matrix[mu, nu])

    @property
    def rank_range(self) -> int:
        return self.matrix.shape[0]

    def as_dict(self) -> dict[tuple[int, int], float]:
        n = self.matrix.shape[0]
        return {(mu, nu): float(self.matrix[mu, nu]) for mu in range(n) for nu in range(n)}

    def max_abs(self) -> float:
        return float(np.abs(self.matrix).max())

    def __repr__(self):  # pragma: no cover - debugging aid
        return f"TensorSample({self.matrix.tolist()!r})"


def _check_event(backend: Backend, event: Event) -> None:
    if event.dimension != backend.dimension:
        raise BackendDomainError(
            f"event has {event.dimension} spatial coordinates, "
            f"backend expects {backend.dimension}"
        )
    if isinstance(backend, EinsteinDeSitter) and not (event.t > 0.0):
        raise BackendDomainError("Einstein-de Sitter chart requires t > 0")


def metric(backend: Backend, event: Event) -> TensorSample:
    """Covariant metric g_{mu nu} at ``event``."""
    _check_event(backend, event)
    n = backend.dimension + 1
    g = np.zeros((n, n))
    if isinstance(backend, Minkowski):
        g[0, 0] = 1.0
        for i in range(1, n):
            g[i, i] = -1.0
    elif isinstance(backend, EinsteinDeSitter):
        g[0, 0] = 1.0
        a2 = event.t ** (4.0 / 3.0)  # scale factor squared, a(t) = t^(2/3)
        for i in range(1, n):
            g[i, i] = -a2
    else:
        conf = np.exp(2.0 * backend.acceleration * event.x[0])
        g[0, 0] = conf
        g[1, 1] = -conf
    return TensorSample(g)


def einstein_tensor(backend: Backend, event: Event) -> TensorSample:
    """Covariant Einstein tensor G_{mu nu} at ``event`` (closed form).

    Minkowski and Rindler2D are flat: identically zero.  For the
    Einstein-de Sitter background the Friedmann equations with a = t^(2/3)
    give G_00 = 3 (a'/a)^2 = 4/(3 t^2) and G_ij = -(2 a a'' + a'^2) delta_ij,
    which vanishes exactly for dust.
    """
    _check_event(backend, event)
    n = backend.dimension + 1
    g = np.zeros((n, n))
    if isinstance(backend, EinsteinDeSitter):
        g[0, 0] = 4.0 / (3.0 * event.t**2)
        # spatial components: 2*a*a'' + a'^2 = 0 for a = t^(2/3)
    return TensorSample(g)


def comoving_volume_element(backend: Backend, t: float) -> float:
    """Spatial volume carried by the mode normalization at time ``t``.

    Minkowski: the box volume L^d.  Einstein-de Sitter: V0 * t^2.
    """
    if isinstance(backend, Minkowski):
        return backend.spatial_volume
    if isinstance(backend, EinsteinDeSitter):
        if not (t > 0.0):
            raise BackendDomainError("Einstein-de Sitter chart requires t > 0")
        return backend.comoving_volume * t**2
    raise BackendDomainError("no volume element is defined for the Rindler wedge")


def outside_future_cone(origin: Event, probe: Event) -> bool:
    """True iff ``probe`` lies strictly outside the future light cone of ``origin``.

    The null boundary counts as inside (not outside).  Points earlier than
    ``origin`` are outside its *future* cone by definition.
    """
    if probe.dimension != origin.dimension:
        raise ValueError("events live in different spatial dimensions")
    dt = probe.t - origin.t
    if dt < 0.0:
        return True
    dx = np.asarray(probe.x) - np.asarray(origin.x)
    return bool(np.sqrt(float(np.dot(dx, dx))) > dt)
