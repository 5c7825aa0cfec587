"""Einstein-equation residuals, scaling studies, golden-section fits."""
import numpy as np
import pytest
from numpy.testing import assert_allclose

from semigrav.consistency import (
    FitResult,
    fit_parameter,
    residual,
    scaling_study,
)
from semigrav.fock import create, new_vacuum
from semigrav.modes import eds_basis, minkowski_basis
from semigrav.spacetime import Event


def _eds_one_quantum(mass, v0):
    basis = eds_basis(comoving_volume=v0, mass=mass)
    return basis, create(new_vacuum(basis), 0)


def test_minkowski_vacuum_is_exactly_self_consistent():
    basis = minkowski_basis(box_side=10.0, dimension=3, mass=1.0, n_max=1)
    vac = new_vacuum(basis)
    events = [Event(t, (x, 0.0, 0.0)) for t in (0.0, 1.0) for x in (0.0, 2.5)]
    rep = residual(basis.backend, vac, basis, events)
    assert rep.global_max == 0.0
    assert rep.per_event == (0.0, 0.0, 0.0, 0.0)


def test_minkowski_particle_residual_is_thermodynamically_small():
    """A single quantum breaks self-consistency by exactly 8 pi w / V in T_00."""
    basis = minkowski_basis(box_side=10.0, dimension=1, mass=1.0, n_max=1)
    one = create(new_vacuum(basis), basis.mode_index((1,)))
    rep = residual(basis.backend, one, basis, [Event(0.0, (0.0,))])
    w = basis.frequencies[basis.mode_index((1,))]
    assert_allclose(rep.global_max, 8.0 * np.pi * w / 10.0, rtol=1e-13)


def _dust_residual(mass, v0, t):
    basis, one = _eds_one_quantum(mass, v0)
    return residual(basis.backend, one, basis, [Event(t, (0.0, 0.0, 0.0))]).global_max


def test_dust_residual_closed_form_at_tuned_mass():
    """With m = V0 / 6 pi the dust part cancels, leaving the quantum tail:
    the 00 component (4/3 - 8 pi m / V0 .. ) reduces to 24 pi^2 / (V0^2 t^4) and
    the spatial part to 24 pi^2 / (V0^2 t^(8/3)); the sup norm is their max."""
    for v0 in (6.0 * np.pi, 60.0 * np.pi, 600.0 * np.pi):
        m = v0 / (6.0 * np.pi)
        for t in (0.5, 1.0, 2.0, 4.0):
            tail_00 = 24.0 * np.pi**2 / (v0**2 * t**4)
            tail_ii = 24.0 * np.pi**2 / (v0**2 * t ** (8.0 / 3.0))
            expected = max(tail_00, tail_ii)
            assert_allclose(_dust_residual(m, v0, t), expected, rtol=1e-8)


def test_dust_residual_scaling_slope_is_minus_two():
    volumes = (6.0 * np.pi, 60.0 * np.pi, 600.0 * np.pi)
    study = scaling_study(
        lambda v: _dust_residual(v / (6.0 * np.pi), v, 1.0), volumes, parameter="V0"
    )
    assert study.status == "ok"
    assert_allclose(study.slope, -2.0, atol=1e-6)
    assert len(study.rows()) == 3
    # the observable itself follows 24 pi^2 / V0^2
    for v0, obs in study.rows():
        assert_allclose(obs, 24.0 * np.pi**2 / v0**2, rtol=1e-8)


def test_residual_report_structure():
    basis, one = _eds_one_quantum(10.0, 60.0 * np.pi)
    events = [Event(t, (0.0, 0.0, 0.0)) for t in (1.0, 2.0)]
    rep = residual(basis.backend, one, basis, events, parameters={"mass": 10.0})
    assert rep.events == tuple(events)
    assert rep.global_max == max(rep.per_event)
    assert rep.parameters == {"mass": 10.0}
    with pytest.raises(ValueError):
        residual(basis.backend, one, basis, [])


def test_scaling_study_validation_and_degenerate_case():
    with pytest.raises(ValueError):
        scaling_study(lambda v: v, [1.0, 2.0])
    with pytest.raises(ValueError):
        scaling_study(lambda v: v, [2.0, 1.0, 3.0])
    with pytest.raises(ValueError):
        scaling_study(lambda v: v, [-1.0, 1.0, 2.0])
    study = scaling_study(lambda v: 0.0, [1.0, 2.0, 4.0])
    assert study.slope is None
    assert study.status == "undefined(zero)"


def test_scaling_study_recovers_power_laws():
    study = scaling_study(lambda v: 7.0 / v**2, [1.0, 10.0, 100.0, 1000.0])
    assert_allclose(study.slope, -2.0, atol=1e-12)
    study = scaling_study(lambda v: 3.0 * v**1.5, [2.0, 4.0, 8.0])
    assert_allclose(study.slope, 1.5, atol=1e-12)


# ---- golden-section fit -------------------------------------------------------

def test_fit_parameter_quadratic():
    res = fit_parameter(lambda m: (m - 3.0) ** 2, 0.0, 10.0, tol=1e-10)
    assert isinstance(res, FitResult)
    assert not res.hit_boundary
    assert_allclose(res.parameter, 3.0, atol=1e-8)
    assert res.value < 1e-15


def test_fit_parameter_flags_boundary_minimum():
    res = fit_parameter(lambda m: m, 1.0, 2.0, tol=1e-8)
    assert res.hit_boundary
    assert res.parameter == 1.0
    res = fit_parameter(lambda m: -m, 1.0, 2.0, tol=1e-8)
    assert res.hit_boundary
    assert res.parameter == 2.0


def test_fit_parameter_validates_input():
    with pytest.raises(ValueError):
        fit_parameter(lambda m: m, 2.0, 1.0)
    with pytest.raises(ValueError):
        fit_parameter(lambda m: m, 0.0, 1.0, tol=-1.0)
    with pytest.raises(ValueError):
        fit_parameter(lambda m: float("nan"), 0.0, 1.0)


def test_fit_recovers_dust_mass_from_residual():
    """Minimizing the t-grid residual over the mass recovers m = V0 / 6 pi."""
    v0 = 600.0 * np.pi
    basis_for = lambda m: eds_basis(comoving_volume=v0, mass=m)

    def objective(m):
        basis = basis_for(m)
        one = create(new_vacuum(basis), 0)
        events = [Event(t, (0.0, 0.0, 0.0)) for t in (1.0, 2.0, 4.0)]
        return residual(basis.backend, one, basis, events).global_max

    target = v0 / (6.0 * np.pi)
    res = fit_parameter(objective, 10.0, 1000.0, tol=1e-4)
    assert not res.hit_boundary
    assert abs(res.parameter - target) <= 1e-3 * target
