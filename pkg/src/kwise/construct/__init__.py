"""Code-theoretic constructions of d-wise independent sample spaces."""

from .gf2 import PRIMITIVE_POLYNOMIALS, BitMatrix, FieldGF2m, MatrixFormatError
from .hadamard import HadamardMatrix, is_prime, paley_hadamard, sylvester_hadamard
from .spaces import (
    MAX_SPACE_RANK,
    bch_parity_check,
    dwise_space_from_code,
    extend_for_odd_d,
    hamming_parity_check,
    lift_subsets,
    pairwise_space_from_hadamard,
    threewise_matrix,
    threewise_space,
    xor_lift,
)

__all__ = [
    "MAX_SPACE_RANK",
    "PRIMITIVE_POLYNOMIALS",
    "BitMatrix",
    "FieldGF2m",
    "HadamardMatrix",
    "MatrixFormatError",
    "bch_parity_check",
    "dwise_space_from_code",
    "extend_for_odd_d",
    "hamming_parity_check",
    "is_prime",
    "lift_subsets",
    "paley_hadamard",
    "pairwise_space_from_hadamard",
    "sylvester_hadamard",
    "threewise_matrix",
    "threewise_space",
    "xor_lift",
]
