"""Born-rule projection onto admissible branch sets with a causality gate.

A measurement replaces the state with one member of an orthonormal branch
set, sampled with probability |<C_i|Psi>|^2 / sum_j |<C_j|Psi>|^2.  Each
branch carries an energy-density profile (a scenario-declared closed form
or a stress-sample-backed callable); the causality gate demands that the
pre- and post-projection profiles agree, within a declared tolerance, at
every probe event outside the future light cone of the measurement event.
Branches failing the gate are inadmissible; if none survive, the engine
reports that distinct outcome instead of guessing.

Admissibility itself is scenario-declared (which branch sets count as
"classical" is an open modeling question), so this module is agnostic:
it takes a BranchSet and enforces only orthonormality, Born statistics,
and the light-cone condition.

Trials use counter-based seeding -- generator seeded by the pair
(master_seed, trial_index) -- so trials are order-independent.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Sequence

import json
import math

import numpy as np

from .fock import FockState, create, inner, new_vacuum, number_expectation, superpose
from .modes import minkowski_basis
from .spacetime import Event, outside_future_cone

__all__ = [
    "ZeroOverlapError",
    "NoAdmissibleCausalBranch",
    "Branch",
    "BranchSet",
    "MeasurementEvent",
    "CausalityReport",
    "TrialRecord",
    "born_probabilities",
    "trial_rng",
    "project",
    "causality_check",
    "constrained_project",
    "gaussian_bump",
    "profile_mixture",
    "EPRResult",
    "run_epr_scenario",
    "PageGeilkerResult",
    "run_page_geilker",
]

_ORTHO_TOL = 1e-10
_NORM_TOL = 1e-9

Profile = Callable[[Event], float]


class ZeroOverlapError(ValueError):
    """The state is orthogonal to every branch: projection is undefined."""


class NoAdmissibleCausalBranch(RuntimeError):
    """Every overlapping branch would change the energy profile acausally."""


@dataclass(frozen=True)
class Branch:
    """One admissible post-measurement alternative."""

    label: str
    state: FockState
    energy_profile: Profile


class BranchSet:
    """An orthonormal family of branches (checked on construction)."""

    __slots__ = ("branches",)

    def __init__(self, branches: Sequence[Branch]):
        branches = tuple(branches)
        if not branches:
            raise ValueError("branch set cannot be empty")
        for br in branches:
            if abs(br.state.norm() - 1.0) > _NORM_TOL:
                raise ValueError(f"branch {br.label!r} is not unit-norm")
        for i in range(len(branches)):
            for j in range(i + 1, len(branches)):
                ov = abs(inner(branches[i].state, branches[j].state))
                if ov >= _ORTHO_TOL:
                    raise ValueError(
                        f"branches {branches[i].label!r} and {branches[j].label!r} "
                        f"are not orthogonal (|overlap| = {ov:.3e})"
                    )
        self.branches = branches

    def __len__(self) -> int:
        return len(self.branches)

    def __iter__(self):
        return iter(self.branches)

    def __getitem__(self, i: int) -> Branch:
        return self.branches[i]


@dataclass(frozen=True)
class MeasurementEvent:
    """Where/when a projection happens, and onto which branch set."""

    event: Event
    branch_set: BranchSet


@dataclass(frozen=True)
class CausalityReport:
    """Outcome of the outside-light-cone energy-invariance check."""

    max_violation_outside: float
    max_diff_inside: float
    n_outside: int
    n_inside: int
    tol: float
    passed: bool

    def as_dict(self) -> dict:
        return {
            "max_violation_outside": self.max_violation_outside,
            "max_diff_inside": self.max_diff_inside,
            "n_outside": self.n_outside,
            "n_inside": self.n_inside,
            "tol": self.tol,
            "passed": self.passed,
        }


@dataclass(frozen=True)
class TrialRecord:
    """One seeded projection trial, serializable bit-for-bit."""

    master_seed: int
    trial_index: int
    branch_index: int
    branch_label: str
    probability: float
    causality: CausalityReport | None

    def __post_init__(self):
        if not (0.0 < self.probability <= 1.0):
            raise ValueError("recorded branch probability must lie in (0, 1]")

    def to_json(self) -> str:
        payload = {
            "master_seed": self.master_seed,
            "trial_index": self.trial_index,
            "branch_index": self.branch_index,
            "branch_label": self.branch_label,
            "probability": self.probability,
            "causality": self.causality.as_dict() if self.causality else None,
        }
        return json.dumps(payload, sort_keys=True)


def born_probabilities(state: FockState, branch_set: BranchSet) -> np.ndarray:
    """p_i = |<C_i|Psi>|^2 / sum_j |<C_j|Psi>|^2 over the branch set."""
    if abs(state.norm() - 1.0) > _NORM_TOL:
        raise ValueError("state must be normalized")
    weights = np.array([abs(inner(br.state, state)) ** 2 for br in branch_set])
    total = float(weights.sum())
    if total <= 1e-24:
        raise ZeroOverlapError("state has zero overlap with every branch")
    return weights / total


def trial_rng(master_seed: int, trial_index: int) -> np.random.Generator:
    """Independent per-trial generator keyed by (master_seed, trial_index)."""
    return np.random.default_rng((int(master_seed), int(trial_index)))


def _sample_index(probabilities: np.ndarray, rng: np.random.Generator) -> int:
    r = rng.random()
    cum = 0.0
    for i, p in enumerate(probabilities):
        cum += p
        if r < cum:
            return i
    return int(len(probabilities) - 1)  # guard against cum rounding below 1


def project(state: FockState, measurement: MeasurementEvent,
            rng_seed) -> tuple[int, FockState]:
    """Sample a branch by the Born rule; the post-state is that branch exactly."""
    rng = rng_seed if isinstance(rng_seed, np.random.Generator) else np.random.default_rng(rng_seed)
    probs = born_probabilities(state, measurement.branch_set)
    idx = _sample_index(probs, rng)
    return idx, measurement.branch_set[idx].state


def causality_check(pre_profile: Profile, post_profile: Profile, origin: Event,
                    probes: Sequence[Event], tol: float) -> CausalityReport:
    """Compare energy profiles at every probe, split by the light cone.

    Outside the future cone of ``origin`` the profiles must agree within
    ``tol``; inside, any difference is legitimate and reported only for
    contrast.
    """
    probes = tuple(probes)
    if not probes:
        raise ValueError("causality check needs a nonempty probe grid")
    max_out = 0.0
    max_in = 0.0
    n_out = 0
    n_in = 0
    for ev in probes:
        diff = abs(float(pre_profile(ev)) - float(post_profile(ev)))
        if outside_future_cone(origin, ev):
            n_out += 1
            max_out = max(max_out, diff)
        else:
            n_in += 1
            max_in = max(max_in, diff)
    return CausalityReport(
        max_violation_outside=max_out,
        max_diff_inside=max_in,
        n_outside=n_out,
        n_inside=n_in,
        tol=tol,
        passed=max_out <= tol,
    )


def constrained_project(state: FockState, measurement: MeasurementEvent,
                        pre_profile: Profile, probes: Sequence[Event], tol: float,
                        rng_seed) -> tuple[int, FockState, CausalityReport]:
    """Born sampling restricted to branches passing the causality gate.

    Branch probabilities are renormalized over the causal subset; if no
    overlapping branch passes, NoAdmissibleCausalBranch is raised.
    """
    rng = rng_seed if isinstance(rng_seed, np.random.Generator) else np.random.default_rng(rng_seed)
    probs = born_probabilities(state, measurement.branch_set)
    reports = [
        causality_check(pre_profile, br.energy_profile, measurement.event, probes, tol)
        for br in measurement.branch_set
    ]
    keep = [i for i, rep in enumerate(reports) if rep.passed and probs[i] > 0.0]
    if not keep:
        raise NoAdmissibleCausalBranch(
            "every overlapping branch changes the energy profile outside the light cone"
        )
    sub = probs[keep] / probs[keep].sum()
    idx = keep[_sample_index(sub, rng)]
    return idx, measurement.branch_set[idx].state, reports[idx]


# ---- energy-profile helpers ---------------------------------------------

def gaussian_bump(center, mass: float, width: float) -> Profile:
    """Normalized static Gaussian energy density carrying total ``mass``."""
    center = np.atleast_1d(np.asarray(center, dtype=float))
    if not (width > 0.0):
        raise ValueError("width must be positive")
    d = len(center)
    norm = mass / ((2.0 * math.pi) ** (d / 2.0) * width**d)

    def profile(ev: Event) -> float:
        dx = np.asarray(ev.x) - center
        return float(norm * math.exp(-float(dx @ dx) / (2.0 * width**2)))

    return profile


def profile_mixture(parts: Sequence[tuple[float, Profile]]) -> Profile:
    """Convex (or any linear) combination of energy profiles."""
    parts = list(parts)

    def profile(ev: Event) -> float:
        return float(sum(w * p(ev) for w, p in parts))

    return profile


# ---- EPR pair scenario ----------------------------------------------------

@dataclass(frozen=True)
class EPRResult:
    n_trials: int
    branch_counts: tuple[int, int]
    branch_frequencies: tuple[float, float]
    born: tuple[float, float]
    anticorrelation_rate: float
    causality_reports: tuple[CausalityReport, CausalityReport]
    max_violation_outside: float
    records: tuple[TrialRecord, ...]


def _epr_setup(box_side: float, mass: float):
    """Four two-level spin modes on a 1-D box: (L+, L-, R+, R-)."""
    basis = minkowski_basis(box_side=box_side, dimension=1, mass=mass, n_max=2)
    vac = new_vacuum(basis)
    l_up = basis.mode_index((1,))
    l_dn = basis.mode_index((-1,))
    r_up = basis.mode_index((2,))
    r_dn = basis.mode_index((-2,))
    branch_i = create(create(vac, l_up), r_dn).normalized()
    branch_ii = create(create(vac, l_dn), r_up).normalized()
    singlet = superpose([(1.0, branch_i), (1.0, branch_ii)], normalize=True)
    return basis, (l_up, l_dn, r_up, r_dn), branch_i, branch_ii, singlet


def run_epr_scenario(n_trials: int, master_seed: int, *, box_side: float = 10.0,
                     station_separation: float = 4.0, measurement_time: float = 0.5,
                     sphere_mass: float = 1.0, sphere_width: float = 0.3,
                     n_probes: int = 48, tol: float = 0.0,
                     keep_records: int = 3) -> EPRResult:
    """Anticorrelated pair: project at station X, verify spin at station Y.

    Both branches share one energy profile (a bump at each station with the
    same mass), so the projection changes spin correlations but not energy:
    the causality check passes with violation exactly zero, and the remote
    spin is always opposite to the local one.
    """
    if n_trials < 1:
        raise ValueError("n_trials must be positive")
    basis, (l_up, l_dn, r_up, r_dn), branch_i, branch_ii, singlet = _epr_setup(box_side, mass=1.0)
    x_left = 0.5 * (box_side - station_separation)
    x_right = x_left + station_separation
    station_x = Event(measurement_time, (x_left,))
    station_y = Event(measurement_time, (x_right,))
    if not (outside_future_cone(station_x, station_y)
            and outside_future_cone(station_y, station_x)):
        raise ValueError("measurement stations must be spacelike-separated")

    # one shared profile: equal-mass bumps at both stations, in every branch
    shared = profile_mixture([
        (0.5, gaussian_bump((x_left,), sphere_mass, sphere_width)),
        (0.5, gaussian_bump((x_right,), sphere_mass, sphere_width)),
    ])
    branches = BranchSet([
        Branch("I", branch_i, shared),
        Branch("II", branch_ii, shared),
    ])
    measurement = MeasurementEvent(event=station_x, branch_set=branches)

    # probe grid straddling the cone: same-time points are all outside,
    # later points near the station are inside
    probes = [Event(measurement_time, (x,)) for x in np.linspace(0.0, box_side, n_probes // 2)]
    probes += [Event(measurement_time + 1.0, (x,))
               for x in np.linspace(0.0, box_side, n_probes - n_probes // 2)]

    born = born_probabilities(singlet, branches)
    # the branch profiles do not vary across trials, so each branch's
    # causality report is computed once and attached to the trials below
    reports = tuple(
        causality_check(shared, br.energy_profile, measurement.event, probes, tol)
        for br in branches
    )

    counts = [0, 0]
    anticorrelated = 0
    records: list[TrialRecord] = []
    for trial in range(n_trials):
        rng = trial_rng(master_seed, trial)
        idx, post = project(singlet, measurement, rng)
        counts[idx] += 1
        local_up = number_expectation(post, l_up)
        remote_dn = number_expectation(post, r_dn)
        remote_up = number_expectation(post, r_up)
        # local "up" must pair with remote "down" and vice versa
        if (local_up == 1.0 and remote_dn == 1.0 and remote_up == 0.0) or (
                local_up == 0.0 and remote_up == 1.0 and remote_dn == 0.0):
            anticorrelated += 1
        if trial < keep_records:
            records.append(TrialRecord(
                master_seed=master_seed,
                trial_index=trial,
                branch_index=idx,
                branch_label=branches[idx].label,
                probability=float(born[idx]),
                causality=reports[idx],
            ))

    return EPRResult(
        n_trials=n_trials,
        branch_counts=(counts[0], counts[1]),
        branch_frequencies=(counts[0] / n_trials, counts[1] / n_trials),
        born=(float(born[0]), float(born[1])),
        anticorrelation_rate=anticorrelated / n_trials,
        causality_reports=reports,
        max_violation_outside=max(r.max_violation_outside for r in reports),
        records=tuple(records),
    )


# ---- sphere-position superposition (lab collapse) -------------------------

@dataclass(frozen=True)
class PageGeilkerResult:
    n_trials: int
    branch_counts: tuple[int, int]
    discontinuity: float
    always_single_sphere: bool
    causality_reports: tuple[CausalityReport, CausalityReport]
    records: tuple[TrialRecord, ...]


def run_page_geilker(n_trials: int, master_seed: int, *, box_side: float = 10.0,
                     position_a: float = 3.0, position_b: float = 7.0,
                     sphere_mass: float = 1.0, sphere_width: float = 0.4,
                     measurement_time: float = 1.0, n_probes: int = 64,
                     tol: float = 0.0, keep_records: int = 3) -> PageGeilkerResult:
    """A sphere in an equal superposition of two positions, then observed.

    Before projection the sourced energy profile is the expectation value,
    half a sphere at each position; afterwards it is one full sphere.  The
    jump between those profiles is the stress-energy discontinuity that a
    sourced Einstein equation cannot absorb at the projection event.
    """
    if n_trials < 1:
        raise ValueError("n_trials must be positive")
    basis = minkowski_basis(box_side=box_side, dimension=1, mass=1.0, n_max=1)
    vac = new_vacuum(basis)
    mode_a = basis.mode_index((-1,))
    mode_b = basis.mode_index((1,))
    state_a = create(vac, mode_a).normalized()
    state_b = create(vac, mode_b).normalized()
    pointer = superpose([(1.0, state_a), (1.0, state_b)], normalize=True)

    bump_a = gaussian_bump((position_a,), sphere_mass, sphere_width)
    bump_b = gaussian_bump((position_b,), sphere_mass, sphere_width)
    pre = profile_mixture([(0.5, bump_a), (0.5, bump_b)])
    branches = BranchSet([
        Branch("sphere_at_A", state_a, bump_a),
        Branch("sphere_at_B", state_b, bump_b),
    ])
    lab = Event(measurement_time, (0.5 * (position_a + position_b),))
    measurement = MeasurementEvent(event=lab, branch_set=branches)

    probes = [Event(measurement_time, (x,))
              for x in np.linspace(0.0, box_side, n_probes)]
    reports = tuple(
        causality_check(pre, br.energy_profile, lab, probes, tol)
        for br in branches
    )
    # equal-time probes sit outside the cone, so the sphere relocation is
    # visible to the check: the reported "violation" is the discontinuity
    discontinuity = min(r.max_violation_outside for r in reports)

    counts = [0, 0]
    always_single = True
    records: list[TrialRecord] = []
    probs = born_probabilities(pointer, branches)
    for trial in range(n_trials):
        rng = trial_rng(master_seed, trial)
        idx, post = project(pointer, measurement, rng)
        counts[idx] += 1
        chosen = branches[idx].energy_profile
        at_a = Event(measurement_time, (position_a,))
        at_b = Event(measurement_time, (position_b,))
        # the post profile is one full sphere, never the pre-projection
        # average: it must deviate from the average at both positions
        if not (abs(chosen(at_a) - pre(at_a)) > 0.0 and abs(chosen(at_b) - pre(at_b)) > 0.0):
            always_single = False
        if trial < keep_records:
            records.append(TrialRecord(
                master_seed=master_seed,
                trial_index=trial,
                branch_index=idx,
                branch_label=branches[idx].label,
                probability=float(probs[idx]),
                causality=reports[idx],
            ))

    return PageGeilkerResult(
        n_trials=n_trials,
        branch_counts=(counts[0], counts[1]),
        discontinuity=discontinuity,
        always_single_sphere=always_single,
        causality_reports=reports,
        records=tuple(records),
    )
