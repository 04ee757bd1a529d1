"""Bit matrices over GF(2) and the extension fields GF(2^m)."""

from __future__ import annotations

from itertools import combinations
from pathlib import Path

import numpy as np

__all__ = ["BitMatrix", "FieldGF2m", "PRIMITIVE_POLYNOMIALS", "MatrixFormatError"]

# Lowest-weight primitive polynomial of each degree, smallest as an integer
# among those of that weight. Bit i is the coefficient of x^i.
PRIMITIVE_POLYNOMIALS: dict[int, int] = {
    2: 0x7,
    3: 0xB,
    4: 0x13,
    5: 0x25,
    6: 0x43,
    7: 0x83,
    8: 0x11D,
    9: 0x211,
    10: 0x409,
    11: 0x805,
    12: 0x1053,
    13: 0x201B,
    14: 0x402B,
    15: 0x8003,
    16: 0x1002D,
}


class MatrixFormatError(ValueError):
    pass


class BitMatrix:
    """Immutable ``rows x cols`` matrix over GF(2), stored as a uint8 array."""

    def __init__(self, bits) -> None:
        arr = np.array(bits, dtype=np.uint8)
        if arr.ndim != 2:
            raise ValueError("bit matrix must be two dimensional")
        if np.any(arr > 1):
            raise ValueError("entries must be 0 or 1")
        arr.setflags(write=False)
        self.bits = arr

    @property
    def rows(self) -> int:
        return self.bits.shape[0]

    @property
    def cols(self) -> int:
        return self.bits.shape[1]

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, BitMatrix):
            return NotImplemented
        return np.array_equal(self.bits, other.bits)

    def __hash__(self) -> int:
        return hash((self.bits.shape, self.bits.tobytes()))

    def __repr__(self) -> str:
        return f"BitMatrix({self.rows}x{self.cols})"

    def row_ints(self) -> list[int]:
        """Rows packed into ints, column ``c`` at bit ``c``."""
        weights = [1 << c for c in range(self.cols)]
        return [sum(w for w, b in zip(weights, row) if b) for row in self.bits.tolist()]

    def column_ints(self) -> list[int]:
        """Columns packed into ints, row ``r`` at bit ``r``."""
        return BitMatrix(self.bits.T).row_ints()

    def rank(self) -> int:
        pivots: dict[int, int] = {}
        for row in self.row_ints():
            while row:
                top = row.bit_length() - 1
                if top not in pivots:
                    pivots[top] = row
                    break
                row ^= pivots[top]
        return len(pivots)

    def row_space(self) -> np.ndarray:
        """All ``2^rows`` GF(2) combinations of the rows, one per output row.

        Combination ``c`` uses row ``r`` when bit ``r`` of ``c`` is set. Rows
        repeat when the matrix is rank deficient.
        """
        r = self.rows
        coeffs = ((np.arange(1 << r, dtype=np.int64)[:, None] >> np.arange(r)) & 1).astype(np.int32)
        return ((coeffs @ self.bits.astype(np.int32)) & 1).astype(np.uint8)

    def dependent_columns(self, d: int) -> tuple[int, ...] | None:
        """A nonempty set of at most ``d`` columns summing to zero, or None.

        Meet in the middle: two distinct column subsets of size at most
        ``d // 2`` with equal sums give a dependent symmetric difference, and
        for odd ``d`` subsets of size ``(d + 1) // 2`` are matched against them.
        Returns None exactly when every ``d`` columns are independent.
        """
        if d < 1:
            raise ValueError("d must be positive")
        cols = self.column_ints()
        n = len(cols)
        d = min(d, n)
        half = d // 2
        seen: dict[int, tuple[int, ...]] = {0: ()}
        for size in range(1, half + 1):
            for sub in combinations(range(n), size):
                acc = 0
                for c in sub:
                    acc ^= cols[c]
                prev = seen.get(acc)
                if prev is not None:
                    return tuple(sorted(set(prev) ^ set(sub)))
                seen[acc] = sub
        if d % 2:
            for sub in combinations(range(n), half + 1):
                acc = 0
                for c in sub:
                    acc ^= cols[c]
                prev = seen.get(acc)
                if prev is not None:
                    return tuple(sorted(set(prev) ^ set(sub)))
        return None

    # text format: "rows cols" then one 0/1 string per row

    def to_text(self) -> str:
        lines = [f"{self.rows} {self.cols}"]
        lines += ["".join(str(b) for b in row) for row in self.bits.tolist()]
        return "\n".join(lines) + "\n"

    @classmethod
    def from_text(cls, text: str) -> "BitMatrix":
        lines = [ln.strip() for ln in text.strip().splitlines()]
        try:
            rows, cols = (int(x) for x in lines[0].split())
        except (IndexError, ValueError) as exc:
            raise MatrixFormatError("first line must be 'rows cols'") from exc
        body = lines[1:]
        if len(body) != rows or any(len(ln) != cols or set(ln) - {"0", "1"} for ln in body):
            raise MatrixFormatError(f"expected {rows} rows of {cols} binary digits")
        return cls([[int(ch) for ch in ln] for ln in body] if rows else np.zeros((0, cols)))

    def save(self, path: str | Path) -> None:
        Path(path).write_text(self.to_text())

    @classmethod
    def load(cls, path: str | Path) -> "BitMatrix":
        return cls.from_text(Path(path).read_text())


class FieldGF2m:
    """GF(2^m) with log/antilog tables for the primitive element ``alpha = x``.

    Elements are ints whose bit ``i`` is the coefficient of ``x^i``.
    """

    def __init__(self, m: int, primitive_polynomial: int | None = None) -> None:
        if primitive_polynomial is None:
            if m not in PRIMITIVE_POLYNOMIALS:
                raise ValueError(f"no built-in primitive polynomial for m={m}; supported 2..16")
            primitive_polynomial = PRIMITIVE_POLYNOMIALS[m]
        if primitive_polynomial.bit_length() != m + 1:
            raise ValueError("polynomial degree must equal m")
        self.m = m
        self.primitive_polynomial = primitive_polynomial
        self.order = (1 << m) - 1
        exp = [0] * (2 * self.order)
        log = [-1] * (1 << m)
        x = 1
        for e in range(self.order):
            if log[x] != -1:
                raise ValueError(f"polynomial {primitive_polynomial:#x} is not primitive")
            exp[e] = x
            log[x] = e
            x <<= 1
            if x >> m:
                x ^= primitive_polynomial
        if x != 1:
            raise ValueError(f"polynomial {primitive_polynomial:#x} is not primitive")
        exp[self.order:] = exp[: self.order]
        self.exp = tuple(exp)
        self.log = tuple(log)

    def alpha_power(self, e: int) -> int:
        return self.exp[e % self.order]

    def mul(self, a: int, b: int) -> int:
        if a == 0 or b == 0:
            return 0
        return self.exp[self.log[a] + self.log[b]]

    def inv(self, a: int) -> int:
        if a == 0:
            raise ZeroDivisionError("0 has no inverse")
        return self.exp[(self.order - self.log[a]) % self.order]
