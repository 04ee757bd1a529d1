"""Compare the numba and numpy backends of the exhaustive independence scan.

Usage::

    python benchmarks/bench_independence.py [--repeat 3] [--quick]

Each case is run once per backend to warm up (and, for numba, to compile),
then timed ``--repeat`` times; the best time is reported. Both backends must
return the same report, which is checked before timing.
"""

from __future__ import annotations

import argparse
import math
import time

from kwise import _kernels
from kwise.construct import (
    FieldGF2m,
    bch_parity_check,
    dwise_space_from_code,
    extend_for_odd_d,
    pairwise_space_from_hadamard,
    sylvester_hadamard,
    threewise_space,
)
from kwise.verify import check_dwise_independence


def _bch(m: int, t: int, odd: bool):
    H = bch_parity_check(FieldGF2m(m), t)
    if odd:
        H = extend_for_odd_d(H)
    d = 2 * t + int(odd)
    return dwise_space_from_code(H, d), d


def cases(quick: bool):
    yield "sylvester-256 d=2", pairwise_space_from_hadamard(sylvester_hadamard(8)), 2
    yield "threewise l=5 d=3", threewise_space(5), 3
    yield "bch m=4 t=2 d=4", *_bch(4, 2, False)
    yield "bch m=4 t=2 d=5", *_bch(4, 2, True)
    if not quick:
        yield "sylvester-1024 d=2", pairwise_space_from_hadamard(sylvester_hadamard(10)), 2
        yield "bch m=5 t=2 d=4", *_bch(5, 2, False)


def best_time(space, d, backend, repeat):
    times = []
    for _ in range(repeat):
        start = time.perf_counter()
        check_dwise_independence(space, d, backend=backend)
        times.append(time.perf_counter() - start)
    return min(times)


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--repeat", type=int, default=3)
    parser.add_argument("--quick", action="store_true", help="skip the two largest cases")
    args = parser.parse_args(argv)
    if not _kernels.HAS_NUMBA:
        parser.error("numba is not importable; nothing to compare")

    print(f"{'case':<22}{'subsets':>9}{'points':>8}{'numba s':>10}{'numpy s':>10}{'speedup':>9}")
    for name, space, d in cases(args.quick):
        reports = {b: check_dwise_independence(space, d, backend=b) for b in ("numba", "numpy")}
        if reports["numba"] != reports["numpy"]:
            raise SystemExit(f"{name}: backends disagree: {reports}")
        t_numba = best_time(space, d, "numba", args.repeat)
        t_numpy = best_time(space, d, "numpy", args.repeat)
        print(
            f"{name:<22}{math.comb(space.n, d):>9}{space.m:>8}"
            f"{t_numba:>10.4f}{t_numpy:>10.4f}{t_numpy / t_numba:>8.1f}x"
        )
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
