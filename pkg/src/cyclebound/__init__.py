"""Exact circuits, covering numbers and decomposition trees for linear
matroids and simplicial complexes."""

from .arith import GF2, QQ, FieldSpec, Scalar
from .complex import Chain, SimplicialComplex, boundary_matrix, complex_from_facets
from .decomp import build_decomposition_tree, validate_tree
from .extremal import gamma_bruteforce, gamma_partition, max_circuit_exact, max_circuit_greedy, s_profile
from .gen import GenSpec, generate, parse_genspec
from .matroid import LinearMatroid, matroid_from_columns, matroid_from_complex
from .verify import analyze

__all__ = [
    "GF2", "QQ", "FieldSpec", "Scalar",
    "Chain", "SimplicialComplex", "boundary_matrix", "complex_from_facets",
    "build_decomposition_tree", "validate_tree",
    "gamma_bruteforce", "gamma_partition", "max_circuit_exact", "max_circuit_greedy", "s_profile",
    "GenSpec", "generate", "parse_genspec",
    "LinearMatroid", "matroid_from_columns", "matroid_from_complex",
    "analyze",
]
__version__ = "0.1.0"
