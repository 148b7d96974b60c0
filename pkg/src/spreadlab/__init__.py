"""Spread bounds for nonnegative matrices with a zero diagonal entry.

Compute spectra and spreads, certify the lower bounds and trace
inequalities, build the extremal two-eigenvalue family with an exact
similarity proof, and search for small-spread matrices.
"""

from .bounds import (
    BoundReport,
    JLLCheck,
    TraceSequence,
    bound_is_strict,
    bound_zero_diagonal,
    eq2_residual,
    jll_certificate,
    pairwise_identity_check,
    spread_lower_bound,
    trace_sequence,
    two_eigenvalue_bound,
    verify_bounds,
)
from .constructions import (
    ExtremalFamily,
    build_A,
    build_M,
    build_N,
    build_S,
    build_U,
    certificate,
    commutator_identity_check,
    extremal_matrix,
    verify_similarity,
)
from .errors import (
    ConstructionError,
    ConvergenceError,
    DimensionError,
    MatrixFormatError,
    NilpotentMatrixError,
    NumericError,
    NumericOverflowError,
    SpreadLabError,
)
from .matrix import (
    DenseMatrix,
    ExactMatrix,
    NonnegativeMatrix,
    exact_eq,
    exact_mul,
    exact_sub,
    format_matrix,
    is_irreducible,
    is_nilpotent,
    normalize_to_unit_radius,
    parse_matrix,
    read_matrix,
    trace_power,
    zero_diagonal_count,
)
from .search import SearchConfig, SearchResult, minimize_spread, sample_cn, sweep_experiment
from .spectral import (
    PerronRoot,
    Spectrum,
    distinct_eigenvalue_count,
    eigenvalues,
    perron,
    perron_root,
    spread,
)

__version__ = "0.1.0"

__all__ = [
    "BoundReport",
    "ConstructionError",
    "ConvergenceError",
    "DenseMatrix",
    "DimensionError",
    "ExactMatrix",
    "ExtremalFamily",
    "JLLCheck",
    "MatrixFormatError",
    "NilpotentMatrixError",
    "NonnegativeMatrix",
    "NumericError",
    "NumericOverflowError",
    "PerronRoot",
    "SearchConfig",
    "SearchResult",
    "Spectrum",
    "SpreadLabError",
    "TraceSequence",
    "bound_is_strict",
    "bound_zero_diagonal",
    "build_A",
    "build_M",
    "build_N",
    "build_S",
    "build_U",
    "certificate",
    "commutator_identity_check",
    "distinct_eigenvalue_count",
    "eigenvalues",
    "eq2_residual",
    "exact_eq",
    "exact_mul",
    "exact_sub",
    "extremal_matrix",
    "format_matrix",
    "is_irreducible",
    "is_nilpotent",
    "jll_certificate",
    "minimize_spread",
    "normalize_to_unit_radius",
    "pairwise_identity_check",
    "parse_matrix",
    "perron",
    "perron_root",
    "read_matrix",
    "sample_cn",
    "spread",
    "spread_lower_bound",
    "sweep_experiment",
    "trace_power",
    "trace_sequence",
    "two_eigenvalue_bound",
    "verify_bounds",
    "verify_similarity",
    "zero_diagonal_count",
]
