"""Guaranteed upper bounds on volumes of polynomial sub-level sets.

The volume of K = {x : g(x) <= 1} for a nonnegative homogeneous polynomial
g is the limit of a monotone sequence of smallest generalized eigenvalues
of explicitly computed Hankel pencils; this package assembles those pencils
exactly, solves them, and cross-checks everything with a deterministic
Monte-Carlo oracle.  Extensions cover banded sub-level sets of
non-homogeneous quadratics and intersections of homogeneous constraints,
for which validated SDP problem data is exported instead of solved.
"""

from .eig import (
    GenEigResult,
    JacobiConvergenceError,
    NotPositiveDefinite,
    cholesky,
    gen_eig_min,
    sym_eigen,
)
from .hankel import (
    BASIS_KINDS,
    Congruence,
    SymMatrix,
    apply_congruence,
    chebyshev_congruence,
    localizing_matrix_unit_interval,
    model_matrix,
    moment_matrix,
    orthonormal_congruence,
)
from .hierarchy import (
    ConvergenceReport,
    DegreeRecord,
    integral_discriminant,
    run_hierarchy,
)
from .moments import (
    BoxSpec,
    MomentExtender,
    MomentSequence,
    MultiMomentTable,
    box_monomial_moment,
    coefficient_box_bound,
    model_moment,
    polynomial_box_moment,
    pushforward_moments,
    pushforward_moments_multi,
)
from .oracle import (
    DegenerateEstimateError,
    McEstimate,
    ball_volume,
    mc_pushforward_moment,
    mc_riesz_residual,
    mc_volume,
)
from .poly import (
    GradedDecomposition,
    Polynomial,
    PolynomialSyntaxError,
    evaluate,
    graded_decompose,
    homogeneity_degree,
    multiply,
    parse_polynomial,
    power_sequence,
)
from .stokes import (
    LinearMomentConstraint,
    SdpBlock,
    SdpProblem,
    build_sdp_nonhomog,
    export_sdp_json,
    export_sdpa,
    import_sdp_json,
    read_sdpa,
    stokes_constraints_multihomog,
    stokes_constraints_nonhomog,
    stokes_poly_qij,
)

__version__ = "0.1.0"

__all__ = [
    "BASIS_KINDS",
    "BoxSpec",
    "Congruence",
    "ConvergenceReport",
    "DegenerateEstimateError",
    "DegreeRecord",
    "GenEigResult",
    "GradedDecomposition",
    "JacobiConvergenceError",
    "LinearMomentConstraint",
    "McEstimate",
    "MomentExtender",
    "MomentSequence",
    "MultiMomentTable",
    "NotPositiveDefinite",
    "Polynomial",
    "PolynomialSyntaxError",
    "SdpBlock",
    "SdpProblem",
    "SymMatrix",
    "apply_congruence",
    "ball_volume",
    "box_monomial_moment",
    "build_sdp_nonhomog",
    "chebyshev_congruence",
    "cholesky",
    "coefficient_box_bound",
    "evaluate",
    "export_sdp_json",
    "export_sdpa",
    "gen_eig_min",
    "graded_decompose",
    "homogeneity_degree",
    "import_sdp_json",
    "integral_discriminant",
    "localizing_matrix_unit_interval",
    "mc_pushforward_moment",
    "mc_riesz_residual",
    "mc_volume",
    "model_matrix",
    "model_moment",
    "moment_matrix",
    "multiply",
    "orthonormal_congruence",
    "parse_polynomial",
    "polynomial_box_moment",
    "power_sequence",
    "pushforward_moments",
    "pushforward_moments_multi",
    "read_sdpa",
    "run_hierarchy",
    "stokes_constraints_multihomog",
    "stokes_constraints_nonhomog",
    "stokes_poly_qij",
    "sym_eigen",
]
