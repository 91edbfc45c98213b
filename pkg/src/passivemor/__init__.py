"""Passivity-preserving model reduction by tangential interpolation at
spectral zeros of shift-parameterized transfer functions."""

from .benchmarks import BenchmarkSpec, random_ph, rlc_ladder
from .errors import (
    CertificateError,
    EigenDecompositionError,
    NumericalError,
    PoleError,
    RankDeficiencyError,
    ReductionRejected,
    SingularOperatorError,
)
from .fileio import load_model, save_model
from .gramians import HankelSpectrum, balanced_truncation, hankel_singular_values
from .hinf import SigmaPlot, error_system, hinf_norm, relative_error, sigma_sample
from .model import (
    FrequencySample,
    PortHamiltonianModel,
    StateSpaceModel,
    evaluate_phi,
    evaluate_transfer,
    minimality_report,
    normalize_with_certificate,
    ph_to_statespace,
    shift_model,
)
from .passivity import (
    AREResult,
    Certificate,
    CertificateViolation,
    compute_xi_limit,
    hamiltonian_matrix,
    is_strictly_passive,
    kyp_matrix,
    normalized_passivity_radius,
    solve_are_extremal,
    verify_certificate,
    xi_limit_grid_scan,
)
from .reduction import (
    InterpolationReport,
    ReducedModel,
    RobustnessReport,
    project,
    project_shifted,
    project_with_certificate,
    robustness_diagnostics,
    spectral_zero_reduction,
    verify_interpolation,
)
from .spectral import (
    DeflatingBasis,
    GreedySelection,
    SpectralZeroSet,
    assemble_deflating_basis,
    build_selection_context,
    gram_matrix,
    greedy_select,
    select_order,
    spectral_zeros,
)
from .sweep import SweepConfig, SweepResult, run_sweep

__version__ = "0.1.0"
