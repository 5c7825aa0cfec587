"""Mode bases for the quantized scalar field on each background.

A mode basis assigns dense integer indices to a finite set of positive-
frequency solutions of the Klein-Gordon equation and exposes the complex
mode-function coefficients (and their first derivatives) needed to assemble
field operators at a spacetime event.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from functools import cached_property

import numpy as np

from .spacetime import EinsteinDeSitter, Minkowski, Rindler2D, BackendDomainError

__all__ = [
    "ModeBasisError",
    "MinkowskiModeBasis",
    "EdSModeBasis",
    "RindlerModeBasis",
    "minkowski_basis",
    "eds_basis",
    "eds_k0_mode",
    "rindler_basis",
    "default_rindler_grid",
    "wedge_kg_inner",
]


class ModeBasisError(ValueError):
    """Raised for invalid basis parameters or unsupported basis operations."""


@dataclass(frozen=True)
class MinkowskiModeBasis:
    """Periodic box modes f_k(x,t) = exp(-i(w t - k.x)) / sqrt(2 w V).

    Labels are integer vectors n with |n_i| <= n_max and k = 2 pi n / L;
    for a massless field the n = 0 zero mode is excluded.
    """

    backend: Minkowski
    mass: float
    n_max: int
    labels: tuple[tuple[int, ...], ...]

    @property
    def n_modes(self) -> int:
        return len(self.labels)

    @cached_property
    def wavevectors(self) -> np.ndarray:
        k = 2.0 * np.pi * np.asarray(self.labels, dtype=float) / self.backend.box_side
        k.setflags(write=False)
        return k

    @cached_property
    def frequencies(self) -> np.ndarray:
        w = np.sqrt(np.sum(self.wavevectors**2, axis=1) + self.mass**2)
        w.setflags(write=False)
        return w

    def mode_index(self, label: tuple[int, ...]) -> int:
        try:
            return self.labels.index(tuple(label))
        except ValueError:
            raise ModeBasisError(f"label {label} not in basis") from None

    # ---- field-operator coefficients at an event ------------------------
    def field_coeffs(self, t: float, x) -> np.ndarray:
        x = np.atleast_1d(np.asarray(x, dtype=float))
        phase = np.exp(-1j * (self.frequencies * t - self.wavevectors @ x))
        return phase / np.sqrt(2.0 * self.frequencies * self.backend.spatial_volume)

    def dt_coeffs(self, t: float, x) -> np.ndarray:
        return -1j * self.frequencies * self.field_coeffs(t, x)

    def dx_coeffs(self, t: float, x) -> np.ndarray:
        """Spatial-gradient coefficients, shape [n_modes, d]."""
        f = self.field_coeffs(t, x)
        return 1j * self.wavevectors * f[:, None]


def minkowski_basis(box_side: float, dimension: int, mass: float, n_max: int) -> MinkowskiModeBasis:
    if mass < 0.0:
        raise ModeBasisError("mass must be non-negative")
    if n_max < 0:
        raise ModeBasisError("n_max must be non-negative")
    backend = Minkowski(dimension=dimension, box_side=box_side)
    labels = [
        n
        for n in itertools.product(range(-n_max, n_max + 1), repeat=dimension)
        if not (mass == 0.0 and all(c == 0 for c in n))
    ]
    if not labels:
        raise ModeBasisError("empty basis: massless field with n_max = 0 has no modes")
    labels.sort()
    return MinkowskiModeBasis(backend=backend, mass=mass, n_max=n_max, labels=tuple(labels))


def eds_k0_mode(t: float, mass: float, comoving_volume: float) -> complex:
    """The exact k = 0 mode f0(t) = exp(-i m t) / (t sqrt(2 m V0)), t > 0.

    f0 solves the curved-space Klein-Gordon equation
    f'' + (2/t) f' + m^2 f = 0 exactly on the a(t) = t^(2/3) background and
    has unit Klein-Gordon norm with the measure V0 t^2.
    """
    if not (t > 0.0):
        raise BackendDomainError("Einstein-de Sitter chart requires t > 0")
    if not (mass > 0.0):
        raise ModeBasisError("the k = 0 mode requires mass > 0")
    if not (comoving_volume > 0.0):
        raise ModeBasisError("comoving_volume must be positive")
    return np.exp(-1j * mass * t) / (t * np.sqrt(2.0 * mass * comoving_volume))


@dataclass(frozen=True)
class EdSModeBasis:
    """Single-mode basis holding the exact k = 0 solution on the dust background."""

    backend: EinsteinDeSitter
    mass: float

    @property
    def n_modes(self) -> int:
        return 1

    def field_coeffs(self, t: float, x) -> np.ndarray:
        return np.array([eds_k0_mode(t, self.mass, self.backend.comoving_volume)])

    def dt_coeffs(self, t: float, x) -> np.ndarray:
        f0 = eds_k0_mode(t, self.mass, self.backend.comoving_volume)
        return np.array([f0 * (-1j * self.mass - 1.0 / t)])

    def dx_coeffs(self, t: float, x) -> np.ndarray:
        return np.zeros((1, self.backend.dimension), dtype=complex)


def eds_basis(comoving_volume: float, mass: float) -> EdSModeBasis:
    if not (mass > 0.0):
        raise ModeBasisError("mass must be positive")
    return EdSModeBasis(backend=EinsteinDeSitter(comoving_volume=comoving_volume), mass=mass)


@dataclass(frozen=True)
class RindlerModeBasis:
    """Right-wedge massless modes, positive frequency in wedge time tau.

    Right-movers g_j(tau, xi) = exp(-i w_j (tau - xi)) / sqrt(4 w_j Xi),
    normalized so the Klein-Gordon self-inner-product over the window
    xi in [-Xi, Xi] equals +1.
    """

    backend: Rindler2D
    omegas: tuple[float, ...]
    xi_halfwidth: float

    @property
    def n_modes(self) -> int:
        return len(self.omegas)

    def mode_function(self, j: int, tau: float, xi) -> np.ndarray:
        w = self.omegas[j]
        xi = np.asarray(xi, dtype=float)
        return np.exp(-1j * w * (tau - xi)) / np.sqrt(4.0 * w * self.xi_halfwidth)

    def dtau_mode(self, j: int, tau: float, xi) -> np.ndarray:
        return -1j * self.omegas[j] * self.mode_function(j, tau, xi)


def rindler_basis(acceleration: float, omegas, xi_halfwidth: float | None = None) -> RindlerModeBasis:
    backend = Rindler2D(acceleration=acceleration)
    omegas = tuple(float(w) for w in omegas)
    if not omegas:
        raise ModeBasisError("Rindler basis needs at least one frequency")
    if any(w <= 0.0 for w in omegas):
        raise ModeBasisError("Rindler frequencies must be positive")
    if any(b <= a for a, b in zip(omegas, omegas[1:])):
        raise ModeBasisError("Rindler frequency grid must be strictly increasing")
    if xi_halfwidth is None:
        xi_halfwidth = 20.0 / acceleration
    if not (xi_halfwidth > 0.0):
        raise ModeBasisError("xi_halfwidth must be positive")
    return RindlerModeBasis(backend=backend, omegas=omegas, xi_halfwidth=xi_halfwidth)


def default_rindler_grid(acceleration: float, n: int = 16, lo: float = 0.1, hi: float = 3.0) -> np.ndarray:
    """Log-spaced wedge frequencies in [lo*a, hi*a] (16 points by default)."""
    if n < 1:
        raise ModeBasisError("grid needs at least one point")
    return np.geomspace(lo * acceleration, hi * acceleration, n)


def wedge_kg_inner(basis: RindlerModeBasis, i: int, j: int, n_points: int = 2001) -> complex:
    """Klein-Gordon inner product (g_i, g_j) over the wedge window at tau = 0.

    In the conformal chart the measure factors cancel, leaving
    i Integral dxi [conj(g_i) dtau g_j - conj(dtau g_i) g_j], evaluated here
    with a composite trapezoid rule.
    """
    xi = np.linspace(-basis.xi_halfwidth, basis.xi_halfwidth, n_points)
    gi = basis.mode_function(i, 0.0, xi)
    gj = basis.mode_function(j, 0.0, xi)
    dgi = basis.dtau_mode(i, 0.0, xi)
    dgj = basis.dtau_mode(j, 0.0, xi)
    integrand = 1j * (np.conj(gi) * dgj - np.conj(dgi) * gj)
    return complex(np.trapezoid(integrand, xi))
