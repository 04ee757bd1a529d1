"""Achieved-versus-bound comparison for constructed spaces."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable

from . import bounds as B
from .construct import (
    BitMatrix,
    FieldGF2m,
    bch_parity_check,
    dwise_space_from_code,
    extend_for_odd_d,
    hamming_parity_check,
    paley_hadamard,
    pairwise_space_from_hadamard,
    sylvester_hadamard,
    threewise_matrix,
    xor_lift,
)
from .space import SampleSpace, marginal, min_entropy, shannon_entropy

__all__ = [
    "FAMILIES",
    "GAP_TOL",
    "Construction",
    "TightnessReport",
    "applicable_bounds",
    "build_construction",
    "tightness_report",
]

GAP_TOL = 1e-9
MIN_ENTROPY_BOUNDS = {"min_entropy_pairwise", "min_entropy_finite", "min_entropy_dwise"}


@dataclass(frozen=True)
class Construction:
    family: str
    params: dict
    space: SampleSpace
    d: int
    matrix: BitMatrix | None = None


def _need(params: dict, *names: str) -> list[int]:
    missing = [nm for nm in names if params.get(nm) is None]
    if missing:
        raise ValueError(f"missing parameter(s): {', '.join('--' + nm for nm in missing)}")
    return [params[nm] for nm in names]


def _sylvester(p: dict) -> Construction:
    (m,) = _need(p, "m")
    if m < 1:
        raise ValueError("--m must be at least 1")
    return Construction("hadamard-sylvester", {"m": m}, pairwise_space_from_hadamard(sylvester_hadamard(m)), 2)


def _paley(p: dict) -> Construction:
    (q,) = _need(p, "q")
    return Construction("hadamard-paley", {"q": q}, pairwise_space_from_hadamard(paley_hadamard(q)), 2)


def _pairwise(p: dict) -> Construction:
    (m,) = _need(p, "m")
    H = hamming_parity_check(m)
    return Construction("pairwise", {"m": m}, dwise_space_from_code(H, 2), 2, H)


def _threewise(p: dict) -> Construction:
    (l,) = _need(p, "l")
    H = threewise_matrix(l)
    return Construction("threewise", {"l": l}, dwise_space_from_code(H, 3), 3, H)


def _bch_even(p: dict) -> Construction:
    m, t = _need(p, "m", "t")
    H = bch_parity_check(FieldGF2m(m), t)
    return Construction("bch-even", {"m": m, "t": t}, dwise_space_from_code(H, 2 * t), 2 * t, H)


def _bch_odd(p: dict) -> Construction:
    m, t = _need(p, "m", "t")
    H = extend_for_odd_d(bch_parity_check(FieldGF2m(m), t))
    return Construction("bch-odd", {"m": m, "t": t}, dwise_space_from_code(H, 2 * t + 1), 2 * t + 1, H)


def _xor_lift(p: dict) -> Construction:
    space, d = _need(p, "input", "d")
    if not isinstance(space, SampleSpace):
        space = SampleSpace.load(space)
    return Construction("xor-lift", {"d": d}, xor_lift(space, d), 2)


FAMILIES: dict[str, Callable[[dict], Construction]] = {
    "hadamard-sylvester": _sylvester,
    "hadamard-paley": _paley,
    "pairwise": _pairwise,
    "threewise": _threewise,
    "bch-even": _bch_even,
    "bch-odd": _bch_odd,
    "xor-lift": _xor_lift,
}


def build_construction(family: str, **params) -> Construction:
    try:
        builder = FAMILIES[family]
    except KeyError:
        raise ValueError(f"unknown family {family!r}; choose from {sorted(FAMILIES)}") from None
    return builder(params)


def applicable_bounds(space: SampleSpace, d: int) -> list[B.BoundReport]:
    """Every lower bound whose hypotheses the space's marginals satisfy.

    ``d`` is the claimed independence order (at least 2).
    """
    margs = [marginal(space, j).probs for j in range(space.n)]
    out: list[B.BoundReport] = []
    if space.k == 2:
        q = [mg[1] for mg in margs]
        if all(0 < qj < 1 for qj in q):
            out.append(B.entropy_bound_pairwise(q))
            if all(qj <= Fraction(1, 2) for qj in q):
                out.append(B.entropy_bound_pairwise_uniform_q(space.n, min(q)))
            out.append(B.min_entropy_bound_pairwise(q))
        if all(qj == Fraction(1, 2) for qj in q) and 2 <= d <= space.n:
            out.append(B.min_entropy_bound_dwise(space.n, d))
    w = max(max(mg) for mg in margs)
    if w < 1:
        out.append(B.min_entropy_bound_finite(space.n, space.k, w))
    return out


@dataclass(frozen=True)
class TightnessReport:
    construction: str
    params: dict
    n: int
    d: int
    support_size: int
    min_entropy: float
    shannon_entropy: float
    bounds: list = field(default_factory=list)
    gaps: list = field(default_factory=list)
    verdict: str = "gap"
    independent: bool | None = None

    def __post_init__(self) -> None:
        for b, g in zip(self.bounds, self.gaps):
            if g < -GAP_TOL:
                raise ValueError(f"bound {b.bound_name} exceeds the achieved entropy by {-g}")

    @property
    def best_bound(self) -> B.BoundReport | None:
        cands = [b for b in self.bounds if b.bound_name in MIN_ENTROPY_BOUNDS]
        return max(cands, key=lambda b: b.value_bits, default=None)

    @property
    def best_gap(self) -> float | None:
        b = self.best_bound
        return None if b is None else self.min_entropy - b.value_bits

    def to_dict(self) -> dict:
        best = self.best_bound
        return {
            "construction": self.construction,
            "params": self.params,
            "n": self.n,
            "d": self.d,
            "support_size": self.support_size,
            "min_entropy": self.min_entropy,
            "shannon_entropy": self.shannon_entropy,
            "bounds": [dict(b.to_dict(), gap_bits=g) for b, g in zip(self.bounds, self.gaps)],
            "best_bound": None if best is None else best.bound_name,
            "best_bound_bits": None if best is None else best.value_bits,
            "best_gap": self.best_gap,
            "ratio": None if not best or best.value_bits == 0 else self.min_entropy / best.value_bits,
            "verdict": self.verdict,
            "independent": self.independent,
        }

    def csv_row(self) -> dict:
        row = {
            "construction": self.construction,
            "params": ";".join(f"{k}={v}" for k, v in self.params.items()),
            "n": self.n,
            "d": self.d,
            "support_size": self.support_size,
            "min_entropy": f"{self.min_entropy:.12g}",
            "shannon_entropy": f"{self.shannon_entropy:.12g}",
        }
        for b, g in zip(self.bounds, self.gaps):
            row[b.bound_name] = f"{b.value_bits:.12g}"
            row[f"gap_{b.bound_name}"] = f"{g:.12g}"
        row["verdict"] = self.verdict
        row["independent"] = "" if self.independent is None else str(self.independent).lower()
        return row


def tightness_report(
    space: SampleSpace,
    d: int,
    construction: str = "space",
    params: dict | None = None,
    independent: bool | None = None,
) -> TightnessReport:
    hmin = min_entropy(space)
    h = shannon_entropy(space)
    bounds = applicable_bounds(space, d)
    gaps = [(hmin if b.bound_name in MIN_ENTROPY_BOUNDS else h) - b.value_bits for b in bounds]
    best = [g for b, g in zip(bounds, gaps) if b.bound_name in MIN_ENTROPY_BOUNDS]
    verdict = "exact-match" if best and min(best) <= GAP_TOL else "gap"
    return TightnessReport(
        construction, dict(params or {}), space.n, d, space.m, hmin, h, bounds, gaps, verdict, independent
    )
