"""Finite sample spaces of jointly distributed discrete variables.

A :class:`SampleSpace` lists the support of ``X = (X_1, ..., X_n)`` with
exact rational probabilities. Values are ``0..k-1`` (zero based). Points
are stored as a read-only ``(m, n)`` integer array sorted lexicographically,
so two spaces with the same distribution compare equal and serialize
identically.
"""

from __future__ import annotations

import json
import math
from collections import Counter
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np

__all__ = [
    "Marginal",
    "SampleSpace",
    "SpaceFormatError",
    "log2_rational",
    "marginal",
    "max_point_probability",
    "min_entropy",
    "parse_fraction",
    "shannon_entropy",
]


class SpaceFormatError(ValueError):
    """Raised when a serialized sample space is malformed."""


def parse_fraction(value: object) -> Fraction:
    """Parse an exact rational from ``"num/den"``, an int, or a Fraction.

    Decimal strings and floats are rejected so that no inexact value can
    enter the exact core by accident.
    """
    if isinstance(value, bool):
        raise ValueError(f"not a rational: {value!r}")
    if isinstance(value, (int, Fraction)):
        return Fraction(value)
    if isinstance(value, str):
        text = value.strip()
        if "." in text or "e" in text.lower():
            raise ValueError(f"decimal input {value!r} rejected; write it as num/den")
        try:
            return Fraction(text)
        except (ValueError, ZeroDivisionError) as exc:
            raise ValueError(f"not a rational: {value!r}") from exc
    raise ValueError(f"not a rational: {value!r}")


def log2_rational(x: Fraction) -> float:
    """``log2(x)`` for a positive rational, without converting ``x`` to float."""
    if x <= 0:
        raise ValueError("log2 of a nonpositive number")
    return math.log2(x.numerator) - math.log2(x.denominator)


def _point_dtype(k: int) -> np.dtype:
    if k <= 256:
        return np.dtype(np.uint8)
    return np.dtype(np.int64)


@dataclass(frozen=True)
class Marginal:
    """Distribution of a single variable ``X_j``."""

    j: int
    probs: tuple[Fraction, ...]

    def __post_init__(self) -> None:
        if sum(self.probs) != 1:
            raise ValueError("marginal probabilities must sum to 1")

    @property
    def k(self) -> int:
        return len(self.probs)

    def __getitem__(self, v: int) -> Fraction:
        return self.probs[v]


class SampleSpace:
    """Finite probability space over ``{0..k-1}^n``.

    Parameters
    ----------
    n : int
        Number of variables.
    k : int
        Alphabet size, at least 2.
    points : array_like
        ``(m, n)`` support points, in any order.
    probs : sequence of rationals
        Probability of each point; all strictly positive, summing to 1.
    """

    def __init__(
        self,
        n: int,
        k: int,
        points: np.ndarray | Sequence[Sequence[int]],
        probs: Iterable[Fraction | int | str],
    ) -> None:
        if n < 1:
            raise ValueError("n must be positive")
        if k < 2:
            raise ValueError("k must be at least 2")
        probs = tuple(parse_fraction(p) for p in probs)
        arr = np.asarray(points, dtype=np.int64)
        if arr.size == 0:
            arr = arr.reshape(0, n)
        if arr.ndim != 2 or arr.shape[1] != n:
            raise ValueError(f"points must have shape (m, {n}), got {arr.shape}")
        if arr.shape[0] != len(probs):
            raise ValueError("one probability per point is required")
        if arr.shape[0] == 0:
            raise ValueError("support must be nonempty")
        if arr.min() < 0 or arr.max() >= k:
            raise ValueError(f"point entries must lie in 0..{k - 1}")
        if any(p <= 0 for p in probs):
            raise ValueError("support probabilities must be strictly positive")
        if sum(probs) != 1:
            raise ValueError("probabilities must sum to exactly 1")

        order = np.lexsort(arr.T[::-1])
        arr = np.ascontiguousarray(arr[order], dtype=_point_dtype(k))
        if arr.shape[0] > 1 and np.any(np.all(arr[1:] == arr[:-1], axis=1)):
            raise ValueError("support points must be distinct")
        arr.setflags(write=False)

        self.n = n
        self.k = k
        self.points = arr
        self.probs = tuple(probs[i] for i in order)

    # construction helpers -------------------------------------------------

    @classmethod
    def uniform(cls, points: np.ndarray, k: int = 2) -> "SampleSpace":
        """Uniform distribution on the distinct rows of ``points``."""
        arr = np.asarray(points)
        m = arr.shape[0]
        return cls(arr.shape[1], k, arr, [Fraction(1, m)] * m)

    @classmethod
    def from_weighted(
        cls, n: int, k: int, points: np.ndarray, probs: Sequence[Fraction]
    ) -> "SampleSpace":
        """Build a space, merging repeated points and dropping zero weights."""
        acc: dict[bytes, Fraction] = {}
        rows: dict[bytes, np.ndarray] = {}
        arr = np.asarray(points, dtype=np.int64)
        for row, p in zip(arr, probs):
            if p == 0:
                continue
            key = row.tobytes()
            acc[key] = acc.get(key, Fraction(0)) + p
            rows.setdefault(key, row)
        keys = list(acc)
        return cls(n, k, np.array([rows[key] for key in keys]).reshape(len(keys), n), [acc[key] for key in keys])

    @classmethod
    def product(cls, marginals: Sequence[Sequence[Fraction]]) -> "SampleSpace":
        """Fully independent variables with the given value distributions."""
        k = max(len(mg) for mg in marginals)
        n = len(marginals)
        points: list[list[int]] = [[]]
        probs: list[Fraction] = [Fraction(1)]
        for mg in marginals:
            mg = [parse_fraction(p) for p in mg]
            points = [pt + [v] for pt in points for v, p in enumerate(mg) if p > 0]
            probs = [pr * p for pr in probs for p in mg if p > 0]
        return cls(n, k, points, probs)

    # basic accessors ------------------------------------------------------

    @property
    def m(self) -> int:
        """Support size."""
        return self.points.shape[0]

    def __len__(self) -> int:
        return self.m

    def support(self) -> list[tuple[tuple[int, ...], Fraction]]:
        return [(tuple(int(v) for v in row), p) for row, p in zip(self.points, self.probs)]

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, SampleSpace):
            return NotImplemented
        return (
            self.n == other.n
            and self.k == other.k
            and self.probs == other.probs
            and np.array_equal(self.points, other.points)
        )

    def __hash__(self) -> int:
        return hash((self.n, self.k, self.probs, self.points.tobytes()))

    def __repr__(self) -> str:
        return f"SampleSpace(n={self.n}, k={self.k}, m={self.m})"

    @cached_property
    def denominator(self) -> int:
        """Least common denominator ``D`` of the point probabilities."""
        return math.lcm(*(p.denominator for p in self.probs))

    @cached_property
    def weights(self) -> tuple[int, ...]:
        """Integer weights ``c_i = p_i * D``; exact Python ints."""
        D = self.denominator
        return tuple(p.numerator * (D // p.denominator) for p in self.probs)

    @cached_property
    def marginal_weights(self) -> list[list[int]]:
        """``marginal_weights[j][v]`` is ``D * Pr[X_j = v]`` as an exact int."""
        out = [[0] * self.k for _ in range(self.n)]
        if self.denominator < 2**62 // max(self.m, 1):
            w = np.array(self.weights, dtype=np.int64)
            for v in range(self.k):
                col = w @ (self.points == v).astype(np.int64)
                for j in range(self.n):
                    out[j][v] = int(col[j])
        else:
            for row, c in zip(self.points, self.weights):
                for j, v in enumerate(row):
                    out[j][int(v)] += c
        return out

    # serialization --------------------------------------------------------

    def to_dict(self) -> dict:
        return {
            "n": self.n,
            "k": self.k,
            "support": [
                {"point": [int(v) for v in row], "prob": f"{p.numerator}/{p.denominator}"}
                for row, p in zip(self.points, self.probs)
            ],
        }

    @classmethod
    def from_dict(cls, data: object) -> "SampleSpace":
        try:
            n = data["n"]
            k = data["k"]
            support = data["support"]
            if not isinstance(n, int) or not isinstance(k, int) or not isinstance(support, list):
                raise TypeError("bad field types")
            points = [entry["point"] for entry in support]
            probs = [entry["prob"] for entry in support]
            if any(not isinstance(p, str) for p in probs):
                raise TypeError("probabilities must be 'num/den' strings")
            if any(not isinstance(pt, list) or len(pt) != n for pt in points):
                raise TypeError(f"every point must be a list of length {n}")
            return cls(n, k, np.array(points, dtype=np.int64).reshape(len(points), n), probs)
        except (KeyError, TypeError, ValueError) as exc:
            raise SpaceFormatError(f"malformed sample space: {exc}") from exc

    def dumps(self) -> str:
        return json.dumps(self.to_dict(), separators=(",", ":"))

    @classmethod
    def loads(cls, text: str) -> "SampleSpace":
        try:
            data = json.loads(text)
        except json.JSONDecodeError as exc:
            raise SpaceFormatError(f"invalid JSON: {exc}") from exc
        return cls.from_dict(data)

    def save(self, path: str | Path) -> None:
        Path(path).write_text(self.dumps() + "\n")

    @classmethod
    def load(cls, path: str | Path) -> "SampleSpace":
        return cls.loads(Path(path).read_text())


def marginal(space: SampleSpace, j: int) -> Marginal:
    """Exact distribution of ``X_j``."""
    if not 0 <= j < space.n:
        raise IndexError(f"variable index {j} out of range 0..{space.n - 1}")
    D = space.denominator
    return Marginal(j, tuple(Fraction(c, D) for c in space.marginal_weights[j]))


def shannon_entropy(space: SampleSpace) -> float:
    """Shannon entropy in bits."""
    # fsum over grouped terms: independent of support order.
    groups = Counter(space.probs)
    return math.fsum(cnt * float(p) * log2_rational(1 / p) for p, cnt in groups.items())


def max_point_probability(space: SampleSpace) -> Fraction:
    return max(space.probs)


def min_entropy(space: SampleSpace) -> float:
    """``log2(1 / max_i p_i)`` with the maximum taken exactly."""
    return log2_rational(1 / max_point_probability(space))
