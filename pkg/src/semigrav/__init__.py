"""Numerical laboratory for semiclassical gravitational self-consistency.

Sparse Fock states of a quantized scalar field on fixed backgrounds,
vacuum-subtracted stress-energy expectation values, residuals of
G_mn = 8 pi <T_mn>, Bogolubov/thermal-wedge spectra, and Born-rule
projection under a light-cone causality constraint.
"""
from .spacetime import (
    BackendDomainError,
    Event,
    EinsteinDeSitter,
    Minkowski,
    Rindler2D,
    TensorSample,
    comoving_volume_element,
    einstein_tensor,
    metric,
    outside_future_cone,
)
from .fock import (
    DROP_TOL,
    BasisMismatchError,
    FockState,
    Occupation,
    ZeroNormError,
    annihilate,
    apply_ladder,
    create,
    inner,
    new_vacuum,
    number_expectation,
    superpose,
)
from .modes import (
    EdSModeBasis,
    MinkowskiModeBasis,
    ModeBasisError,
    RindlerModeBasis,
    default_rindler_grid,
    eds_basis,
    eds_k0_mode,
    minkowski_basis,
    rindler_basis,
    wedge_kg_inner,
)
from .bogolubov import (
    BogolubovMatrix,
    QuadratureError,
    bogolubov_coefficients,
    rindler_occupancy_in_vacuum,
)
from .stress_energy import (
    StressSample,
    integrated_energy,
    quadratic_expectation,
    stress_sample,
    total_energy,
    wavepacket_state,
)
from .consistency import (
    FitResult,
    ResidualReport,
    ScalingStudy,
    fit_parameter,
    residual,
    scaling_study,
)
from .measurement import (
    Branch,
    BranchSet,
    CausalityReport,
    EPRResult,
    MeasurementEvent,
    NoAdmissibleCausalBranch,
    PageGeilkerResult,
    TrialRecord,
    ZeroOverlapError,
    born_probabilities,
    causality_check,
    constrained_project,
    gaussian_bump,
    profile_mixture,
    project,
    run_epr_scenario,
    run_page_geilker,
    trial_rng,
)
from .report import RunReport, Table, emit
from .scenarios import (
    SCENARIO_NAMES,
    ScenarioConfigError,
    default_config,
    run_scenario,
    validate_config,
)

__version__ = "0.1.0"
