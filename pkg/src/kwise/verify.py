"""Exact d-wise independence checks and the orthonormal witness matrix.

:func:`check_dwise_independence` compares, for every ``d``-subset of the
variables and every value tuple, the exact joint probability with the
product of the marginals. The work happens in integer weights (``p_i * D``)
inside :mod:`kwise._kernels`; a pure-Python path takes over when ``D**d``
would overflow int64.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations, islice
from typing import Iterator, Sequence

import numpy as np

from . import _kernels
from .space import SampleSpace, marginal

__all__ = [
    "Counterexample",
    "IndependenceReport",
    "WitnessMatrix",
    "build_witness_matrix",
    "cantelli_bound",
    "cantelli_tail",
    "check_dwise_independence",
    "column_gram_defect",
    "proof_variable",
]

# C(n, d) * k**d cap on the number of joint-vs-product comparisons
MAX_CHECKS = 10**9


@dataclass(frozen=True)
class Counterexample:
    subset: tuple[int, ...]
    values: tuple[int, ...]
    lhs: Fraction  # joint probability
    rhs: Fraction  # product of marginals


@dataclass(frozen=True)
class IndependenceReport:
    d: int
    holds: bool
    counterexample: Counterexample | None = None

    def __post_init__(self) -> None:
        if self.holds != (self.counterexample is None):
            raise ValueError("counterexample must be present exactly when the check fails")
        if self.counterexample is not None and self.counterexample.lhs == self.counterexample.rhs:
            raise ValueError("counterexample sides must differ")


def _subset_chunks(n: int, d: int, size: int) -> Iterator[np.ndarray]:
    combos = combinations(range(n), d)
    while True:
        chunk = np.fromiter(
            (i for c in islice(combos, size) for i in c), dtype=np.int64
        )
        if chunk.size == 0:
            return
        yield chunk.reshape(-1, d)


def _joint_weights(space: SampleSpace, subset: Sequence[int]) -> dict[tuple[int, ...], int]:
    acc: dict[tuple[int, ...], int] = {}
    cols = space.points[:, list(subset)]
    for row, c in zip(cols, space.weights):
        key = tuple(int(v) for v in row)
        acc[key] = acc.get(key, 0) + c
    return acc


def _counterexample(space: SampleSpace, subset: tuple[int, ...], values: tuple[int, ...]) -> Counterexample:
    D = space.denominator
    joint = _joint_weights(space, subset).get(values, 0)
    rhs = Fraction(1)
    for j, v in zip(subset, values):
        rhs *= Fraction(space.marginal_weights[j][v], D)
    return Counterexample(subset, values, Fraction(joint, D), rhs)


def _decode(code: int, k: int, d: int) -> tuple[int, ...]:
    out = []
    for _ in range(d):
        out.append(code % k)
        code //= k
    return tuple(reversed(out))


def _check_exact(space: SampleSpace, d: int) -> IndependenceReport:
    # arbitrary-precision path; one accumulation pass per subset
    D = space.denominator
    scale = D ** (d - 1)
    marg = space.marginal_weights
    for subset in combinations(range(space.n), d):
        joint = _joint_weights(space, subset)
        for values in np.ndindex(*([space.k] * d)):
            prod = 1
            for j, v in zip(subset, values):
                prod *= marg[j][v]
            if joint.get(values, 0) * scale != prod:
                return IndependenceReport(d, False, _counterexample(space, subset, tuple(values)))
    return IndependenceReport(d, True)


def check_dwise_independence(
    space: SampleSpace, d: int, *, backend: str | None = None
) -> IndependenceReport:
    """Exhaustively test whether every ``d`` of the variables are mutually independent.

    The first failing (subset, value tuple) in lexicographic order is
    returned as the counterexample.
    """
    n, k = space.n, space.k
    if not 1 <= d <= n:
        raise ValueError(f"d must satisfy 1 <= d <= n={n}, got {d}")
    if math.comb(n, d) * k**d > MAX_CHECKS:
        raise ValueError(f"check cap exceeded: C({n},{d})*{k}^{d} > {MAX_CHECKS}")
    D = space.denominator
    if D**d >= 2**62:
        return _check_exact(space, d)

    columns = np.ascontiguousarray(space.points.T, dtype=np.int64)
    weights = np.array(space.weights, dtype=np.int64)
    marg = np.array(space.marginal_weights, dtype=np.int64)
    scale = D ** (d - 1)
    for chunk in _subset_chunks(n, d, _kernels.NUMBA_CHUNK_SUBSETS):
        fail = _kernels.scan_subsets(columns, weights, marg, chunk, k, scale, backend=backend)
        bad = np.flatnonzero(fail >= 0)
        if bad.size:
            s = int(bad[0])
            subset = tuple(int(i) for i in chunk[s])
            return IndependenceReport(d, False, _counterexample(space, subset, _decode(int(fail[s]), k, d)))
    return IndependenceReport(d, True)


# -- witness matrix -----------------------------------------------------------


@dataclass(frozen=True)
class WitnessMatrix:
    """Rows indexed by support points, columns by ``0..n``."""

    entries: np.ndarray

    @property
    def shape(self) -> tuple[int, int]:
        return self.entries.shape

    def gram(self) -> np.ndarray:
        u = self.entries
        return u.conj().T @ u

    def row_norms_squared(self) -> np.ndarray:
        return np.sum(np.abs(self.entries) ** 2, axis=1)


def build_witness_matrix(space: SampleSpace) -> WitnessMatrix:
    """Real witness matrix of a binary space.

    Column 0 is ``sqrt(p_i)``; column ``j`` is ``-sqrt(p_i q_j / (1 - q_j))``
    where the point has ``X_j = 0`` and ``sqrt(p_i (1 - q_j) / q_j)`` where
    it has ``X_j = 1``, with ``q_j = Pr[X_j = 1]``. The columns are
    orthonormal exactly when the variables are pairwise independent.
    """
    if space.k != 2:
        raise ValueError("witness matrix is defined for binary spaces (k=2)")
    q = []
    for j in range(space.n):
        qj = marginal(space, j)[1]
        if qj in (0, 1):
            raise ValueError(f"degenerate marginal: Pr[X_{j}=1] = {qj}; need 0 < q_j < 1")
        q.append(float(qj))
    q_arr = np.array(q)
    sp = np.sqrt(np.array([float(p) for p in space.probs]))[:, None]
    ones = space.points.astype(bool)
    u_one = sp * np.sqrt((1 - q_arr) / q_arr)
    u_zero = -sp * np.sqrt(q_arr / (1 - q_arr))
    return WitnessMatrix(np.hstack([sp, np.where(ones, u_one, u_zero)]))


def column_gram_defect(w: WitnessMatrix) -> float:
    """Largest absolute entry of ``U^H U - I``."""
    g = w.gram()
    return float(np.max(np.abs(g - np.eye(g.shape[0]))))


# -- Cantelli -------------------------------------------------------------


def cantelli_bound(variance: float, t: float) -> float:
    """One-sided tail bound ``1 / (1 + t^2 / Var)``; zero for a constant variable."""
    if t <= 0:
        raise ValueError("t must be positive")
    if variance < 0:
        raise ValueError("variance must be nonnegative")
    if variance == 0:
        return 0.0
    return 1.0 / (1.0 + t * t / variance)


def proof_variable(space: SampleSpace) -> tuple[list[Fraction], Fraction, Fraction]:
    """Exact values of ``Y = 1 + sum_j [(1-X_j) q_j/(1-q_j) + X_j (1-q_j)/q_j]`` per point.

    Returns ``(values, mean, variance)``; the mean and variance are computed
    from the support, not from the closed forms, so callers can compare.
    """
    if space.k != 2:
        raise ValueError("Y is defined for binary spaces (k=2)")
    q = [marginal(space, j)[1] for j in range(space.n)]
    if any(qj in (0, 1) for qj in q):
        raise ValueError("degenerate marginal; need 0 < q_j < 1")
    base = 1 + sum(qj / (1 - qj) for qj in q)
    coef = [(1 - 2 * qj) / (qj * (1 - qj)) for qj in q]
    active = [j for j, c in enumerate(coef) if c != 0]
    values = []
    for row in space.points:
        y = base
        for j in active:
            if row[j]:
                y += coef[j]
        values.append(y)
    mean = sum((p * y for p, y in zip(space.probs, values)), Fraction(0))
    var = sum((p * (y - mean) ** 2 for p, y in zip(space.probs, values)), Fraction(0))
    return values, mean, var


def cantelli_tail(space: SampleSpace, t: float | Fraction) -> Fraction:
    """Exact ``Pr[Y >= E[Y] - t]`` for the proof variable ``Y``."""
    values, mean, _ = proof_variable(space)
    threshold = mean - Fraction(t)
    return sum((p for p, y in zip(space.probs, values) if y >= threshold), Fraction(0))
