"""Hot loops for exhaustive independence checking.

Two interchangeable backends scan a chunk of variable subsets and report,
for each subset, the first value tuple whose joint weight differs from the
product of marginal weights (or -1 when all agree).

Selection: ``KWISE_BACKEND=numba`` (default when numba imports) or
``KWISE_BACKEND=numpy``. ``KWISE_THREADS`` caps numba's thread count.

All arithmetic is int64; callers guarantee ``D**d < 2**62`` where ``D`` is
the common probability denominator, so no product can overflow.
"""

from __future__ import annotations

import os

import numpy as np

try:
    import numba
    from numba import njit, prange

    HAS_NUMBA = True
    if "NUMBA_THREADING_LAYER" not in os.environ:
        # skip the tbb probe, which warns on older tbb installs
        numba.config.THREADING_LAYER = "workqueue"
except ImportError:  # pragma: no cover - numba is a declared dependency
    HAS_NUMBA = False

_requested = os.environ.get("KWISE_BACKEND", "numba").strip().lower()
if _requested not in ("numba", "numpy"):
    raise ImportError(f"KWISE_BACKEND must be 'numba' or 'numpy', got {_requested!r}")
BACKEND = "numba" if (_requested == "numba" and HAS_NUMBA) else "numpy"

# elements of the (subsets x points) code array per numpy chunk
_NUMPY_CHUNK_CELLS = 1 << 22
NUMBA_CHUNK_SUBSETS = 1 << 16


def _set_threads() -> None:
    threads = os.environ.get("KWISE_THREADS")
    if BACKEND == "numba" and threads:
        numba.set_num_threads(max(1, min(int(threads), numba.config.NUMBA_NUM_THREADS)))


def scan_subsets_numpy(
    columns: np.ndarray,
    weights: np.ndarray,
    marg: np.ndarray,
    subsets: np.ndarray,
    k: int,
    scale: int,
) -> np.ndarray:
    """Vectorized scan.

    ``columns[j]`` holds variable ``j`` across the support (the transposed
    point array) and ``marg[j, v]`` is the integer marginal weight.
    """
    m = columns.shape[1]
    S, d = subsets.shape
    kd = k**d
    fail = np.full(S, -1, dtype=np.int64)
    # digits[c, a] = value of the a-th variable in tuple code c
    codes_all = np.arange(kd, dtype=np.int64)
    digits = np.empty((kd, d), dtype=np.int64)
    c = codes_all.copy()
    for a in range(d - 1, -1, -1):
        digits[:, a] = c % k
        c //= k
    step = max(1, _NUMPY_CHUNK_CELLS // max(m, 1))
    use_bincount = int(weights.sum()) < 2**53
    fweights = weights.astype(np.float64)
    for lo in range(0, S, step):
        sub = subsets[lo : lo + step]
        s = sub.shape[0]
        code = np.zeros((s, m), dtype=np.int64)
        for a in range(d):
            code = code * k + columns[sub[:, a]]
        code += (np.arange(s, dtype=np.int64) * kd)[:, None]
        if use_bincount:
            # float weights are exact: every partial sum stays below 2**53
            joint = np.bincount(code.ravel(), weights=np.tile(fweights, s), minlength=s * kd)
            joint = joint.astype(np.int64).reshape(s, kd)
        else:
            joint = np.zeros(s * kd, dtype=np.int64)
            np.add.at(joint, code.ravel(), np.tile(weights, s))
            joint = joint.reshape(s, kd)
        expected = np.ones((s, kd), dtype=np.int64)
        for a in range(d):
            expected *= marg[sub[:, a][:, None], digits[None, :, a]]
        bad = joint * scale != expected
        rows = np.flatnonzero(bad.any(axis=1))
        if rows.size:
            fail[lo + rows] = bad[rows].argmax(axis=1)
    return fail


if HAS_NUMBA:

    @njit(parallel=True, cache=True)
    def _scan_subsets_numba(columns, weights, marg, subsets, k, scale):  # pragma: no cover - jitted
        m = columns.shape[1]
        S, d = subsets.shape
        kd = k**d
        fail = np.full(S, -1, dtype=np.int64)
        for s in prange(S):
            joint = np.zeros(kd, dtype=np.int64)
            codes = np.zeros(m, dtype=np.int64)
            for a in range(d):
                col = columns[subsets[s, a]]
                for i in range(m):
                    codes[i] = codes[i] * k + col[i]
            for i in range(m):
                joint[codes[i]] += weights[i]
            for code in range(kd):
                prod = 1
                c = code
                for a in range(d - 1, -1, -1):
                    prod *= marg[subsets[s, a], c % k]
                    c //= k
                if joint[code] * scale != prod:
                    fail[s] = code
                    break
        return fail


def scan_subsets_numba(columns, weights, marg, subsets, k, scale) -> np.ndarray:
    _set_threads()
    return _scan_subsets_numba(
        columns,
        weights,
        marg,
        np.ascontiguousarray(subsets, dtype=np.int64),
        np.int64(k),
        np.int64(scale),
    )


def scan_subsets(columns, weights, marg, subsets, k, scale, backend: str | None = None) -> np.ndarray:
    """Dispatch to the selected backend. ``columns`` is a C-contiguous int64 ``(n, m)`` array."""
    backend = backend or BACKEND
    if backend == "numba":
        if not HAS_NUMBA:
            raise RuntimeError("numba backend requested but numba is not installed")
        return scan_subsets_numba(columns, weights, marg, subsets, k, scale)
    return scan_subsets_numpy(columns, weights, marg, subsets, k, scale)
