"""Low-entropy d-wise independent sample spaces from codes and Hadamard matrices."""

from __future__ import annotations

from fractions import Fraction
from itertools import combinations

import numpy as np

from ..space import SampleSpace
from .gf2 import BitMatrix, FieldGF2m
from .hadamard import HadamardMatrix

__all__ = [
    "MAX_SPACE_RANK",
    "bch_parity_check",
    "dwise_space_from_code",
    "extend_for_odd_d",
    "hamming_parity_check",
    "lift_subsets",
    "pairwise_space_from_hadamard",
    "threewise_matrix",
    "threewise_space",
    "xor_lift",
]

MAX_SPACE_RANK = 24


def _bit_columns(values: list[int], width: int) -> np.ndarray:
    # row r holds bit r of each value
    v = np.array(values, dtype=np.int64)
    return ((v[None, :] >> np.arange(width)[:, None]) & 1).astype(np.uint8)


def pairwise_space_from_hadamard(h: HadamardMatrix) -> SampleSpace:
    """``order - 1`` balanced pairwise independent bits on ``order`` equiprobable points.

    Rows starting with -1 are negated, the first column is dropped, and
    entries map ``+1 -> 0``, ``-1 -> 1``.
    """
    if h.order < 2:
        raise ValueError("need a Hadamard matrix of order at least 2")
    e = h.entries.astype(np.int8) * h.entries[:, :1]
    return SampleSpace.uniform((e[:, 1:] == -1).astype(np.uint8))


def hamming_parity_check(m: int) -> BitMatrix:
    """``m x (2^m - 1)`` matrix; column ``j`` is the binary expansion of ``j + 1``."""
    if m < 1:
        raise ValueError("m must be positive")
    return BitMatrix(_bit_columns(list(range(1, 1 << m)), m))


def threewise_matrix(l: int) -> BitMatrix:
    """All-ones row on top of every ``l``-bit column.

    Column ``j`` carries the expansion of ``(j + 1) mod 2^l``, so the zero
    column comes last and the matrix equals ``extend_for_odd_d`` applied to
    :func:`hamming_parity_check`.
    """
    if l < 1:
        raise ValueError("l must be positive")
    n = 1 << l
    body = _bit_columns([(j + 1) % n for j in range(n)], l)
    return BitMatrix(np.vstack([np.ones((1, n), dtype=np.uint8), body]))


def threewise_space(l: int) -> SampleSpace:
    """``2^l`` unbiased 3-wise independent bits on ``2^(l+1)`` points."""
    return dwise_space_from_code(threewise_matrix(l), 3)


def bch_parity_check(field: FieldGF2m, t: int) -> BitMatrix:
    """Binary parity-check matrix of the narrow-sense BCH code with designed distance ``2t + 1``.

    Block ``b`` (for the root ``alpha^i``, ``i = 2b + 1``) has ``m`` rows; row
    ``r`` of the block, column ``j`` holds bit ``r`` of ``alpha^(i j)``. Full
    row rank ``m t`` is verified, never assumed.
    """
    m, N = field.m, field.order
    if t < 1:
        raise ValueError("t must be positive")
    if 2 * t + 1 > N:
        raise ValueError(f"designed distance 2t+1={2 * t + 1} exceeds length {N}")
    blocks = [
        _bit_columns([field.alpha_power(i * j) for j in range(N)], m)
        for i in range(1, 2 * t, 2)
    ]
    H = BitMatrix(np.vstack(blocks))
    rank = H.rank()
    if rank != m * t:
        raise ValueError(
            f"BCH parity check has rank {rank} < m*t={m * t}; m={m} is too small for t={t}"
        )
    return H


def extend_for_odd_d(parity_check: BitMatrix) -> BitMatrix:
    """Append a zero column on the right, then put an all-ones row on top."""
    body = np.hstack([parity_check.bits, np.zeros((parity_check.rows, 1), dtype=np.uint8)])
    return BitMatrix(np.vstack([np.ones((1, body.shape[1]), dtype=np.uint8), body]))


def dwise_space_from_code(generator: BitMatrix, d: int) -> SampleSpace:
    """Uniform distribution on the row space of ``generator``.

    The coordinates are d-wise independent unbiased bits when every ``d``
    columns are linearly independent; both that and full row rank are
    checked up front.
    """
    r = generator.rows
    if r > MAX_SPACE_RANK:
        raise ValueError(f"rank cap exceeded: {r} rows > {MAX_SPACE_RANK}")
    if generator.rank() != r:
        raise ValueError(f"generator is rank deficient: rank {generator.rank()} < {r} rows")
    bad = generator.dependent_columns(d)
    if bad is not None:
        raise ValueError(f"columns {list(bad)} are linearly dependent; not {d}-wise independent")
    return SampleSpace.uniform(generator.row_space())


def lift_subsets(n: int, d: int) -> list[tuple[int, ...]]:
    """Variable subsets whose parities form the lifted pairwise independent string.

    Even ``d``: every nonempty subset of size at most ``d/2``. Odd ``d``:
    every nonempty subset of size at most ``(d-1)/2`` plus ``{0} | s`` for
    each ``s`` of size ``(d-1)/2`` avoiding 0. Ordered by size, then
    lexicographically.
    """
    if d < 2:
        raise ValueError("d must be at least 2")
    h = d // 2 if d % 2 == 0 else (d - 1) // 2
    subsets = [s for size in range(1, h + 1) for s in combinations(range(n), size)]
    if d % 2:
        subsets += [(0,) + s for s in combinations(range(1, n), h)]
    return subsets


def xor_lift(space: SampleSpace, d: int) -> SampleSpace:
    """Replace ``X`` by the parities over :func:`lift_subsets`; probabilities carry over."""
    if space.k != 2:
        raise ValueError("xor_lift needs a binary space")
    subsets = lift_subsets(space.n, d)
    if not subsets:
        raise ValueError("lift produces no variables")
    M = np.zeros((space.n, len(subsets)), dtype=np.int32)
    for c, s in enumerate(subsets):
        M[list(s), c] = 1
    lifted = (space.points.astype(np.int32) @ M) & 1
    return SampleSpace.from_weighted(len(subsets), 2, lifted, list(space.probs))
