"""Fidelity-based coherence: measures, incoherent channels, and transformations."""

from .core import (
    NUMERIC_TOL,
    RANK_TOL,
    STRUCTURAL_TOL,
    DimensionError,
    EigSystem,
    HermiticityError,
    NotPSDError,
    TraceError,
    ValidationError,
    as_state_vector,
    dephase,
    hermitian_eig,
    is_incoherent,
    matrix_sqrt_psd,
    random_density,
    random_incoherent,
    random_pure,
    rng_from_seed,
    validate_density,
)
from .measures import (
    Ensemble,
    RoofConfig,
    RoofResult,
    c_f_pure,
    c_f_qubit,
    c_f_roof_estimate,
    c_l1,
    dominant_index,
    f_of,
    optimal_qubit_ensemble,
    uhlmann_fidelity,
)
from .channels import (
    ChannelValidationError,
    ChannelViolation,
    IncoherentChannel,
    MeasurementOutcomes,
    SelectiveOutcome,
    apply_channel,
    column_structure_residual,
    completeness_residual,
    incoherent_unitary,
    is_incoherent_kraus,
    random_incoherent_channel,
    selective_outcomes,
    validate_channel,
)
from .transform import (
    TransformabilityError,
    TransformProblem,
    build_transform_channel,
    can_transform,
    canonicalize_qubit_mixed,
    canonicalize_qubit_pure,
    transform_problem,
)
from .verify import (
    Suite,
    SuiteConfig,
    UnsupportedSuiteError,
    VerificationReport,
    Violation,
    replay_trial,
    run_all,
    run_c1_suite,
    run_c3_suite,
    run_c4_suite,
    run_l1_relation_suite,
    run_roof_oracle_suite,
    run_suite,
)

__version__ = "0.1.0"
