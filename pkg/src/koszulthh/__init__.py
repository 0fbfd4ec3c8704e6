"""Exact chain-level computations for Koszul duality and Hochschild homology of small DGAs."""

from .exact_linear import F2, QQ, FieldSpec, SparseMatrix, kernel_basis, rank
from .graded_complex import (
    BettiTable,
    ChainComplex,
    GradedBasis,
    TruncationWindow,
    WindowError,
    dual_complex,
    homology_dimensions,
    tensor_complex,
    validate_complex,
)
from .dga import Connectivity, DGAlgebra, opposite_dga, tensor_dga, underlying_complex, validate_dga
from .bar_koszul import (
    NotCertifiable,
    bar_construction,
    certify_window,
    double_centralizer_report,
    koszul_dual,
    koszul_dual_covering,
    koszul_dual_homology,
)
from .hochschild import hh_dimensions, hochschild_complex, shuffle_map, shuffle_monoidality_check
from .duality import DualityReport, HypothesisViolation, free_loop_profile, verify_thh_duality
from .corpus import corpus_expected, corpus_get

__version__ = "0.1.0"
