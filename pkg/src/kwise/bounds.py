"""Lower bounds on the (min-)entropy of pairwise and d-wise independent variables.

Every bound is a closed formula except the Shannon-entropy bound, which is a
supremum over a scalar ``t`` in ``(0, n]``; :func:`maximize_scalar` handles
it by a coarse scan followed by golden-section refinement of every local
maximum found, since nothing guarantees the objective is unimodal.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Iterable, Sequence

import numpy as np

from .space import SampleSpace, log2_rational, marginal, parse_fraction
from .verify import WitnessMatrix

__all__ = [
    "BoundReport",
    "PhaseAngles",
    "PreconditionError",
    "entropy_bound_pairwise",
    "entropy_bound_pairwise_uniform_q",
    "maximize_scalar",
    "min_entropy_bound_dwise",
    "min_entropy_bound_finite",
    "min_entropy_bound_pairwise",
    "solve_phase_angles",
    "witness_matrix_finite",
]

SCAN_POINTS = 1024
T_TOL = 1e-12
_INV_PHI = (math.sqrt(5) - 1) / 2


class PreconditionError(ValueError):
    """Inputs violate a hypothesis of the bound being evaluated."""


@dataclass(frozen=True)
class BoundReport:
    bound_name: str
    n: int
    d: int
    value_bits: float
    parameters: dict = field(default_factory=dict)

    def __post_init__(self) -> None:
        if self.value_bits < 0:
            raise ValueError("a lower bound in bits cannot be negative")
        t_star = self.parameters.get("t_star")
        if t_star is not None and not 0 < t_star <= self.n:
            raise ValueError("t_star must lie in (0, n]")

    def to_dict(self) -> dict:
        return {
            "bound_name": self.bound_name,
            "n": self.n,
            "d": self.d,
            "value_bits": self.value_bits,
            "parameters": {key: _jsonable(v) for key, v in self.parameters.items()},
        }


def _jsonable(v):
    if isinstance(v, Fraction):
        return f"{v.numerator}/{v.denominator}"
    if isinstance(v, (list, tuple)):
        return [_jsonable(x) for x in v]
    return v


# -- scalar optimizer ---------------------------------------------------------


def _golden(f: Callable[[float], float], a: float, b: float) -> tuple[float, float, int]:
    c = b - _INV_PHI * (b - a)
    e = a + _INV_PHI * (b - a)
    fc, fe = f(c), f(e)
    it = 0
    while b - a > max(T_TOL, 4 * math.ulp(b)) and it < 500:
        if fc >= fe:
            b, e, fe = e, c, fc
            c = b - _INV_PHI * (b - a)
            fc = f(c)
        else:
            a, c, fc = c, e, fe
            e = a + _INV_PHI * (b - a)
            fe = f(e)
        it += 1
    x = c if fc >= fe else e
    return x, max(fc, fe), it


def maximize_scalar(
    f: Callable[[float], float], hi: float, scan: int = SCAN_POINTS
) -> tuple[float, float, int]:
    """Maximize ``f`` over ``(0, hi]``.

    Returns ``(t_star, f(t_star), golden_iterations)``.
    """
    ts = hi * np.arange(1, scan + 1) / scan
    vals = np.array([f(float(t)) for t in ts])
    best_t, best_v = float(ts[-1]), float(vals[-1])
    iterations = 0
    for i in range(scan):
        left = vals[i - 1] if i > 0 else -math.inf
        right = vals[i + 1] if i + 1 < scan else -math.inf
        if vals[i] >= left and vals[i] >= right:
            a = float(ts[i - 1]) if i > 0 else hi * 1e-9 / scan
            b = float(ts[i + 1]) if i + 1 < scan else hi
            t, v, it = _golden(f, a, b)
            iterations += it
            if vals[i] > v:
                t, v = float(ts[i]), float(vals[i])
            if v > best_v:
                best_t, best_v = t, v
    return best_t, best_v, iterations


# -- pairwise binary --------------------------------------------------------


def _rationals(q: Iterable) -> list[Fraction]:
    return [parse_fraction(x) for x in q]


def entropy_bound_pairwise(q: Sequence) -> BoundReport:
    """Shannon-entropy lower bound for pairwise independent bits with ``Pr[X_j=1] = q_j``.

    ``sup_{0<t<=n} log2(n+1-t) / (1 + V/t^2)`` with
    ``V = sum_j (1-2q_j)^2 / (q_j (1-q_j))``, the variance of the proof variable.
    """
    qs = _rationals(q)
    n = len(qs)
    if n == 0:
        raise ValueError("need at least one variable")
    if any(not 0 < qj < 1 for qj in qs):
        raise PreconditionError("every q_j must lie strictly inside (0, 1)")
    V = sum(((1 - 2 * qj) ** 2 / (qj * (1 - qj)) for qj in qs), Fraction(0))
    if V == 0:
        return BoundReport(
            "entropy_pairwise", n, 2, math.log2(n + 1),
            {"variance": V, "t_star": None, "boundary": True, "iterations": 0},
        )
    Vf = float(V)

    def f(t: float) -> float:
        return math.log2(n + 1 - t) / (1 + Vf / (t * t))

    t_star, value, it = maximize_scalar(f, float(n))
    return BoundReport(
        "entropy_pairwise", n, 2, value,
        {"variance": V, "t_star": t_star, "boundary": False, "iterations": it},
    )


def entropy_bound_pairwise_uniform_q(n: int, q) -> BoundReport:
    """Entropy bound when every ``q_j >= q`` with ``0 < q <= 1/2``.

    Also reports the closed-form value at ``t = n/2`` under ``t_half_value``.
    """
    q = parse_fraction(q)
    if n < 1:
        raise ValueError("n must be positive")
    if not 0 < q <= Fraction(1, 2):
        raise PreconditionError("q must lie in (0, 1/2]")
    qf = float(q)

    def g(t: float) -> float:
        return math.log2(n + 1 - t) / (1 + n / (t * t * qf))

    t_star, value, it = maximize_scalar(g, float(n))
    half = math.log2(n / 2 + 1) / (1 + 4 / (n * qf))
    return BoundReport(
        "entropy_pairwise_uniform_q", n, 2, value,
        {"q": q, "t_star": t_star, "iterations": it, "t_half_value": half},
    )


def min_entropy_bound_pairwise(q: Sequence) -> BoundReport:
    """``log2(1 + sum_j min((1-q_j)/q_j, q_j/(1-q_j)))``; the sum is exact."""
    qs = _rationals(q)
    n = len(qs)
    if n == 0:
        raise ValueError("need at least one variable")
    if any(not 0 < qj < 1 for qj in qs):
        raise PreconditionError("every q_j must lie strictly inside (0, 1)")
    total = 1 + sum((min((1 - qj) / qj, qj / (1 - qj)) for qj in qs), Fraction(0))
    return BoundReport("min_entropy_pairwise", n, 2, log2_rational(total), {"argument": total})


def min_entropy_bound_finite(n: int, k: int, w) -> BoundReport:
    """Min-entropy bound for pairwise independent ``[k]``-valued variables.

    ``w`` caps every value probability of every variable.
    """
    w = parse_fraction(w)
    if k < 2:
        raise ValueError("k must be at least 2")
    if n < 1:
        raise ValueError("n must be positive")
    if not Fraction(1, k) <= w < 1:
        raise PreconditionError(f"w must lie in [1/{k}, 1)")
    if w >= Fraction(1, 2):
        arg = (1 - w) / w * n + 1
    else:
        arg = Fraction(n + 1)
    return BoundReport("min_entropy_finite", n, 2, log2_rational(arg), {"k": k, "w": w, "argument": arg})


def dwise_binomial_sum(n: int, d: int) -> int:
    if d % 2 == 0:
        return sum(math.comb(n, i) for i in range(d // 2 + 1))
    h = (d - 1) // 2
    return sum(math.comb(n, i) for i in range(h + 1)) + math.comb(n - 1, h)


def min_entropy_bound_dwise(n: int, d: int) -> BoundReport:
    """Min-entropy bound for ``d``-wise independent unbiased bits."""
    if not 2 <= d <= n:
        raise ValueError(f"d must satisfy 2 <= d <= n={n}")
    total = dwise_binomial_sum(n, d)
    return BoundReport("min_entropy_dwise", n, d, math.log2(total), {"argument": total})


# -- phase angles -----------------------------------------------------------


@dataclass(frozen=True)
class PhaseAngles:
    angles: tuple[float, ...]

    def residual(self, b: Sequence[float]) -> float:
        s = sum(bt * cmath.exp(1j * a) for a, bt in zip(self.angles, b[1:]))
        return abs(s - b[0])


def solve_phase_angles(b: Sequence[float]) -> PhaseAngles:
    """Angles ``alpha_2..alpha_k`` with ``sum_t exp(i alpha_t) b_t = b_1``.

    Requires ``b_t <= b_1`` for ``t >= 2`` and ``sum_{t>=2} b_t >= b_1``.
    Circles are peeled off largest first: each step picks a point on the
    current circle whose distance to the remaining target lies inside the
    annulus reachable by the circles still left, using the intersection with
    nonnegative imaginary part relative to the target direction.
    """
    b = [float(x) for x in b]
    if len(b) < 2:
        raise ValueError("need b_1 and at least one b_t")
    if any(x < 0 for x in b):
        raise PreconditionError("b values must be nonnegative")
    b1, rest = b[0], b[1:]
    if any(x > b1 for x in rest) or sum(rest) < b1:
        raise PreconditionError("need b_t <= b_1 for all t >= 2 and sum_{t>=2} b_t >= b_1")

    order = sorted(range(len(rest)), key=lambda i: (-rest[i], i))
    radii = [rest[i] for i in order]
    # suffix annuli: reachable moduli using radii[i:]
    hi_suf = [0.0] * (len(radii) + 1)
    lo_suf = [0.0] * (len(radii) + 1)
    for i in range(len(radii) - 1, -1, -1):
        hi_suf[i] = hi_suf[i + 1] + radii[i]
        # largest radius first, so radii[i] dominates the suffix
        lo_suf[i] = max(0.0, radii[i] - hi_suf[i + 1])

    angles = [0.0] * len(rest)
    z = complex(b1, 0.0)
    for pos, r in enumerate(radii):
        lo, hi = lo_suf[pos + 1], hi_suf[pos + 1]
        mod = abs(z)
        if r == 0:
            theta = 0.0
        elif pos == len(radii) - 1:
            theta = cmath.phase(z) if mod > 0 else 0.0
        elif mod == 0:
            theta = 0.0
        else:
            rho = min(max(mod, lo, abs(mod - r)), hi, mod + r)
            cos_rel = (mod * mod + r * r - rho * rho) / (2 * mod * r)
            rel = math.acos(max(-1.0, min(1.0, cos_rel)))
            theta = cmath.phase(z) + rel
        angles[order[pos]] = math.remainder(theta, 2 * math.pi)
        z -= r * cmath.exp(1j * theta)
    return PhaseAngles(tuple(angles))


def witness_matrix_finite(space: SampleSpace) -> WitnessMatrix:
    """Complex witness matrix for ``[k]``-valued variables.

    Per variable ``j`` the most likely value (smallest on ties) gets
    ``-sqrt(p_i / omega_j)``; any other value ``z`` gets
    ``sqrt(p_i omega_j) exp(i alpha_jz)``, with ``omega_j = max(1, w_j/(1-w_j))``
    and the angles from :func:`solve_phase_angles`.
    """
    m, n = space.m, space.n
    sp = np.sqrt(np.array([float(p) for p in space.probs]))
    u = np.empty((m, n + 1), dtype=np.complex128)
    u[:, 0] = sp
    for j in range(n):
        probs = marginal(space, j).probs
        w = max(probs)
        if w == 1:
            raise PreconditionError(f"variable {j} is deterministic")
        top = probs.index(w)
        omega = max(Fraction(1), w / (1 - w))
        others = [z for z in range(space.k) if z != top]
        phases = solve_phase_angles([float(w / omega)] + [float(probs[z]) for z in others])
        col_vals = np.empty(space.k, dtype=np.complex128)
        col_vals[top] = -1 / math.sqrt(omega)
        for z, a in zip(others, phases.angles):
            col_vals[z] = math.sqrt(omega) * cmath.exp(1j * a)
        u[:, j + 1] = sp * col_vals[space.points[:, j].astype(np.int64)]
    return WitnessMatrix(u)
