from __future__ import annotations

import numpy as np

__all__ = ["HadamardMatrix", "paley_hadamard", "sylvester_hadamard", "is_prime"]

MAX_SYLVESTER_EXPONENT = 20


class HadamardMatrix:
    """Square ``+-1`` matrix with ``H H^T = order * I``, checked on construction."""

    def __init__(self, entries) -> None:
        arr = np.array(entries, dtype=np.int8)
        if arr.ndim != 2 or arr.shape[0] != arr.shape[1]:
            raise ValueError("Hadamard matrix must be square")
        if not np.all(np.abs(arr) == 1):
            raise ValueError("entries must be +1 or -1")
        order = arr.shape[0]
        # float64 BLAS is exact here: every partial sum is an integer <= order
        f = arr.astype(np.float64)
        if not np.array_equal(f @ f.T, order * np.eye(order)):
            raise ValueError("rows are not orthogonal")
        arr.setflags(write=False)
        self.entries = arr

    @property
    def order(self) -> int:
        return self.entries.shape[0]

    def __repr__(self) -> str:
        return f"HadamardMatrix(order={self.order})"


def sylvester_hadamard(m: int) -> HadamardMatrix:
    """Order ``2^m`` matrix by repeated Kronecker product with ``[[1, 1], [1, -1]]``."""
    if m < 0:
        raise ValueError("m must be nonnegative")
    if m > MAX_SYLVESTER_EXPONENT:
        raise ValueError(f"order 2^{m} exceeds the cap 2^{MAX_SYLVESTER_EXPONENT}")
    h2 = np.array([[1, 1], [1, -1]], dtype=np.int8)
    h = np.ones((1, 1), dtype=np.int8)
    for _ in range(m):
        h = np.kron(h2, h)
    return HadamardMatrix(h)


def is_prime(q: int) -> bool:
    if q < 2:
        return False
    i = 2
    while i * i <= q:
        if q % i == 0:
            return False
        i += 1
    return True


def paley_hadamard(q: int) -> HadamardMatrix:
    """Paley type I matrix of order ``q + 1`` for a prime ``q = 3 (mod 4)``.

    ``H = I + [[0, 1^T], [-1, Q]]`` where ``Q[i, j] = chi(j - i)`` is the
    quadratic character matrix (skew-symmetric since -1 is a non-residue).
    """
    if not is_prime(q) or q % 4 != 3:
        raise ValueError(f"q must be a prime congruent to 3 mod 4, got {q}")
    chi = np.array([0] + [1 if pow(x, (q - 1) // 2, q) == 1 else -1 for x in range(1, q)], dtype=np.int8)
    idx = np.arange(q)
    Q = chi[(idx[None, :] - idx[:, None]) % q]
    S = np.zeros((q + 1, q + 1), dtype=np.int8)
    S[0, 1:] = 1
    S[1:, 0] = -1
    S[1:, 1:] = Q
    return HadamardMatrix(np.eye(q + 1, dtype=np.int8) + S)
