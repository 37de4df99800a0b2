"""Multivariate Prony reconstruction on hyperbolic-cross sampling sets."""

from .ideal import multiplication_matrices, reduce, verify_hbasis
from .multiindex import IndexSet, graded_lex_cmp, hyperbolic_cross
from .oracle import ExponentialSumSpec, SampleOracle, make_oracle_from_spec
from .prony import DEGREEWISE, SMILE, Decomposition, decompose, hilbert_function, smile, symbolic_decomposition
from .recovery import RecoveryConfig, RecoveryResult, reconstruct
from .scalars import EXACT, ExactField, FloatField, GaussianRational, make_field
from .sparsepoly import SparseIntPolynomial, geometric_oracle, recover_sparse_polynomial

__version__ = "0.1.0"

__all__ = [
    "DEGREEWISE",
    "EXACT",
    "SMILE",
    "Decomposition",
    "ExactField",
    "ExponentialSumSpec",
    "FloatField",
    "GaussianRational",
    "IndexSet",
    "RecoveryConfig",
    "RecoveryResult",
    "SampleOracle",
    "SparseIntPolynomial",
    "decompose",
    "geometric_oracle",
    "graded_lex_cmp",
    "hilbert_function",
    "hyperbolic_cross",
    "make_field",
    "make_oracle_from_spec",
    "multiplication_matrices",
    "reconstruct",
    "recover_sparse_polynomial",
    "reduce",
    "smile",
    "symbolic_decomposition",
    "verify_hbasis",
]
