"""Quantum Fisher information and fragment precision in the spin-star model."""

from .errors import (
    ConfigError,
    DimensionMismatchError,
    DomainError,
    EmptyFragmentError,
    NotDensityMatrixError,
    NotHermitianError,
    SizeCapError,
    SpinStarError,
    UnsupportedRegimeError,
)
from .observables import (
    ObservableSpec,
    PrecisionResult,
    aq_moments,
    local_expectations,
    precision_finite,
    precision_thermodynamic,
    s_y_expectation,
)
from .qfi import (
    F_MAX,
    QfiResult,
    SldDecomposition,
    TimescaleSet,
    optimal_observable,
    qfi_closed_form,
    qfi_generic,
    qfi_thermodynamic,
    sld,
    system_qfi,
    timescales,
)
from .spinstar import (
    CouplingSet,
    FragmentState,
    GaussianCouplingSpec,
    ModelPoint,
    coherence_factor,
    fragment_state,
    gamma_thermodynamic,
    omega,
    overlap_c,
    sample_couplings,
    system_state,
)

__version__ = "0.1.0"
