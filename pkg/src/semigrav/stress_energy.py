"""Vacuum-subtracted stress-energy expectation values on sparse Fock states.

Every observable here is a normal-ordered quadratic form in the field and
its derivatives,

    <Psi| :A B: |Psi>,   A = sum_k (g_k a_k + conj(g_k) a_k+),

so the vacuum subtraction <Psi|T|Psi> - <0|T|0> is implicit: normal
ordering kills the vacuum piece exactly.  Expanding :AB: into its four
ladder products and letting only the lowering parts act on the sparse
state gives

    <:AB:> = 2 Re <A-Psi | B-Psi> + 2 Re <Psi | A-(B- Psi)>,

which is manifestly real and costs a couple of passes over the nonzero
amplitudes.  Tensor components are then assembled from the analytic mode
derivatives and the backend metric via

    T_mn = <:d_m phi d_n phi:> - g_mn <:L:>,
    <:L:> = (1/2) (sum_m g^mm <:(d_m phi)^2:> - m^2 <:phi^2:>).
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from math import sqrt

import numpy as np

from .fock import BasisMismatchError, FockState, create, inner, new_vacuum, superpose
from .modes import EdSModeBasis, MinkowskiModeBasis, ModeBasisError
from .spacetime import Event, TensorSample, metric

__all__ = [
    "StressSample",
    "quadratic_expectation",
    "stress_sample",
    "total_energy",
    "wavepacket_state",
    "integrated_energy",
]

_NORM_TOL = 1e-9


@dataclass(frozen=True)
class StressSample:
    """Stress-energy expectation values at one spacetime event."""

    event: Event
    components: TensorSample

    def __getitem__(self, index: tuple[int, int]) -> float:
        return self.components[index]


def _require_normalized(state: FockState) -> None:
    if abs(state.norm() - 1.0) > _NORM_TOL:
        raise ValueError("state must be normalized to unit norm")


def _lowering_image(state: FockState, coeffs: np.ndarray) -> FockState:
    """Apply sum_k g_k a_k to the state in one pass over its amplitudes."""
    acc: dict = {}
    for occ, amp in state.terms.items():
        for mode, count in occ.pairs:
            c = coeffs[mode]
            if c == 0.0:
                continue
            lowered = occ.bump(mode, -1)
            acc[lowered] = acc.get(lowered, 0.0) + amp * c * sqrt(count)
    return FockState(state.basis, acc)


def _quadratic_from_images(state: FockState, u: FockState, v: FockState,
                           coeffs_a: np.ndarray) -> float:
    # <:AB:> = <u|v> + <v|u> + <Psi|A-B-Psi> + conj thereof
    cross = inner(u, v)
    double = inner(state, _lowering_image(v, coeffs_a))
    return 2.0 * (cross.real + double.real)


def quadratic_expectation(state: FockState, g: np.ndarray, h: np.ndarray) -> float:
    """<Psi| :A B: |Psi> for A = sum(g_k a_k + h.c.), B likewise from h.

    The coefficient arrays are indexed by basis mode; the result is exactly
    real because :AB: is Hermitian for field-type A, B.
    """
    n = state.basis.n_modes
    g = np.asarray(g, dtype=complex)
    h = np.asarray(h, dtype=complex)
    if g.shape != (n,) or h.shape != (n,):
        raise BasisMismatchError("coefficient arrays must have one entry per basis mode")
    _require_normalized(state)
    u = _lowering_image(state, g)
    v = _lowering_image(state, h)
    return _quadratic_from_images(state, u, v, g)


def _derivative_coefficients(basis, event: Event) -> tuple[list, np.ndarray, float]:
    """Arrays (d_t phi, d_x1 phi, ..., phi) at the event, plus metric and mass."""
    g = metric(basis.backend, event).matrix
    x = np.asarray(event.x, dtype=float)
    field = basis.field_coeffs(event.t, x)
    dt = basis.dt_coeffs(event.t, x)
    dx = basis.dx_coeffs(event.t, x)
    coeff_list = [dt] + [dx[:, i] for i in range(dx.shape[1])] + [field]
    return coeff_list, g, basis.mass


def stress_sample(state: FockState, basis, backend, event: Event) -> StressSample:
    """Assemble <Psi|T_mn|Psi> (vacuum-subtracted) at one event."""
    if isinstance(basis, (MinkowskiModeBasis, EdSModeBasis)):
        if basis.backend != backend:
            raise BasisMismatchError("basis was built for a different backend")
    else:
        raise ModeBasisError("stress-energy sampling needs a Minkowski or EdS basis")
    if state.basis != basis:
        raise BasisMismatchError("state lives on a different basis")
    _require_normalized(state)

    coeffs, g, mass = _derivative_coefficients(basis, event)
    dim = len(coeffs) - 1  # d+1 derivative slots, last entry is phi itself
    images = [_lowering_image(state, c) for c in coeffs]

    def pair(i: int, j: int) -> float:
        return _quadratic_from_images(state, images[i], images[j], coeffs[i])

    deriv = np.zeros((dim, dim))
    for i in range(dim):
        for j in range(i, dim):
            deriv[i, j] = deriv[j, i] = pair(i, j)
    phi_sq = pair(dim, dim)

    inv_diag = 1.0 / np.diag(g)
    lagrangian = 0.5 * (float(inv_diag @ np.diag(deriv)) - mass ** 2 * phi_sq)
    tensor = deriv - g * lagrangian
    return StressSample(event=event, components=TensorSample(tensor))


def total_energy(state: FockState, basis) -> float:
    """sum_k omega_k <N_k>; the box-mode form of the integrated energy."""
    if not isinstance(basis, MinkowskiModeBasis):
        raise ModeBasisError("total_energy is defined for box mode bases")
    if state.basis != basis:
        raise BasisMismatchError("state lives on a different basis")
    _require_normalized(state)
    omega = basis.frequencies
    total = 0.0
    for occ, amp in state.terms.items():
        weight = abs(amp) ** 2
        for mode, count in occ.pairs:
            total += weight * count * omega[mode]
    return float(total)


def wavepacket_state(basis: MinkowskiModeBasis, x0) -> FockState:
    """Normalized one-particle packet sum_k e^(-i k.x0)/sqrt(2 w_k) |1_k>."""
    if not isinstance(basis, MinkowskiModeBasis):
        raise ModeBasisError("wavepacket_state is defined for box mode bases")
    if basis.n_modes == 0:
        raise ModeBasisError("empty basis")
    x0 = np.atleast_1d(np.asarray(x0, dtype=float))
    if x0.shape != (basis.backend.dimension,):
        raise ValueError("x0 must have one coordinate per spatial dimension")
    amps = np.exp(-1j * basis.wavevectors @ x0) / np.sqrt(2.0 * basis.frequencies)
    vac = new_vacuum(basis)
    parts = [(amps[k], create(vac, k)) for k in range(basis.n_modes)]
    return superpose(parts, normalize=True)


def integrated_energy(state: FockState, basis, backend, t: float = 0.0,
                      points_per_axis: int = 64) -> float:
    """Riemann sum of T_00 over a uniform box lattice at fixed time."""
    if not isinstance(basis, MinkowskiModeBasis):
        raise ModeBasisError("lattice integration is defined for box mode bases")
    if points_per_axis < 1:
        raise ValueError("points_per_axis must be positive")
    L = backend.box_side
    d = backend.dimension
    axis = np.linspace(0.0, L, points_per_axis, endpoint=False)
    cell = (L / points_per_axis) ** d
    total = 0.0
    for x in itertools.product(axis, repeat=d):
        total += stress_sample(state, basis, backend, Event(t, x))[(0, 0)]
    return total * cell
