"""Tools for composite quadratics with exact sparsity terms.

Objective: Theta(x) = x'Ax + theta(x) + h(x) with theta an indicator
(zero, sphere, simplex, orthant, sphere-orthant) and h either a scaled
zero norm or a sparsity-ball indicator.  The package computes exact
distances to the generalized subdifferential, enumerates critical
points of sphere-constrained quadratics, certifies square-root growth
empirically, and runs a proximal gradient method with exact proxes.
"""

from .certify import (
    ConstantComparison,
    ExponentFitError,
    KLCertificate,
    KLEstimate,
    KLSample,
    compare_constant,
    estimate_kl_exponent,
    sample_neighborhood,
    verify_kl_half,
    write_samples_csv,
)
from .linalg import (
    EigDecomposition,
    SupportSet,
    SymMatrix,
    spectral_norm,
    sym_eig,
    top_k_indices,
)
from .oracle import (
    OracleReport,
    RatioScanTable,
    ScanRow,
    global_min_enum,
    kl_ratio_scan,
    prox_bruteforce,
    random_feasible_point,
    random_symmetric,
    subdiff_distance_bruteforce,
)
from .sets import (
    ConeQueryResult,
    DegenerateInput,
    enumerate_sparsity_cone,
    normal_cone_simplex_residual,
    normal_cone_sparsity_contains,
    project_nonneg,
    project_simplex,
    project_sparse_simplex,
    project_sparse_sphere,
    project_sparsity,
    project_sphere,
    support,
    tangent_simplex_contains,
)
from .solver import (
    IterateTrace,
    RateEstimationError,
    RateReport,
    SolverConfig,
    SolverConfigError,
    estimate_linear_rate,
    hard_threshold,
    prox_theta_h,
    proximal_gradient,
    random_feasible,
    write_trace_csv,
)
from .sphere_quadratic import (
    Family,
    KLConstantReport,
    SphereCriticalSet,
    crit_points_diag,
    crit_points_general,
    dist_subdiff_sphere_quad,
    kl_constant_theoretical,
    riemannian_grad_norm,
    same_order_window,
)
from .subdiff import (
    ProblemSpec,
    ReductionCheck,
    SparsityBall,
    SubdiffResult,
    Theta,
    ZeroNorm,
    check_critical,
    check_support_reduction,
    objective,
    subdiff_distance,
    theta_value,
)

__version__ = "0.1.0"

__all__ = [
    "ConeQueryResult",
    "ConstantComparison",
    "DegenerateInput",
    "EigDecomposition",
    "ExponentFitError",
    "Family",
    "IterateTrace",
    "KLCertificate",
    "KLConstantReport",
    "KLEstimate",
    "KLSample",
    "OracleReport",
    "ProblemSpec",
    "RateEstimationError",
    "RateReport",
    "RatioScanTable",
    "ReductionCheck",
    "ScanRow",
    "SolverConfig",
    "SolverConfigError",
    "SparsityBall",
    "SphereCriticalSet",
    "SubdiffResult",
    "SupportSet",
    "SymMatrix",
    "Theta",
    "ZeroNorm",
    "check_critical",
    "check_support_reduction",
    "compare_constant",
    "crit_points_diag",
    "crit_points_general",
    "dist_subdiff_sphere_quad",
    "enumerate_sparsity_cone",
    "estimate_kl_exponent",
    "estimate_linear_rate",
    "global_min_enum",
    "hard_threshold",
    "kl_constant_theoretical",
    "kl_ratio_scan",
    "normal_cone_simplex_residual",
    "normal_cone_sparsity_contains",
    "objective",
    "project_nonneg",
    "project_simplex",
    "project_sparse_simplex",
    "project_sparse_sphere",
    "project_sparsity",
    "project_sphere",
    "prox_bruteforce",
    "prox_theta_h",
    "proximal_gradient",
    "random_feasible",
    "random_feasible_point",
    "random_symmetric",
    "riemannian_grad_norm",
    "same_order_window",
    "sample_neighborhood",
    "spectral_norm",
    "subdiff_distance",
    "subdiff_distance_bruteforce",
    "support",
    "sym_eig",
    "tangent_simplex_contains",
    "theta_value",
    "top_k_indices",
    "verify_kl_half",
    "write_samples_csv",
    "write_trace_csv",
]
