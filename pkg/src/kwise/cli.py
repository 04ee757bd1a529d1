"""Command-line front end.

Exit codes: 0 success (or independence holds), 1 semantic failure
(independence fails, a bound is violated, invalid parameters), 2 I/O or
parse error.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys
from fractions import Fraction
from pathlib import Path

from . import bounds as B
from .construct import MatrixFormatError
from .report import FAMILIES, build_construction, tightness_report
from .space import SampleSpace, SpaceFormatError, marginal, max_point_probability, min_entropy, parse_fraction, shannon_entropy
from .verify import MAX_CHECKS, IndependenceReport, check_dwise_independence

EXIT_OK, EXIT_FAIL, EXIT_IO = 0, 1, 2
MAX_SUPPORT = 1 << 24


class CliError(Exception):
    def __init__(self, message: str, code: int = EXIT_FAIL) -> None:
        super().__init__(message)
        self.code = code


def _rational(text: str) -> Fraction:
    try:
        return parse_fraction(text)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def _int_range(text: str) -> list[int]:
    """``"2..5"`` -> [2, 3, 4, 5]; ``"3,7,11"`` -> [3, 7, 11]; ``"4"`` -> [4]."""
    try:
        if ".." in text:
            lo, hi = text.split("..")
            return list(range(int(lo), int(hi) + 1))
        return [int(x) for x in text.split(",")]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected an int, a range a..b, or a list a,b,c: {text!r}") from None


def _load_space(path: str) -> SampleSpace:
    try:
        return SampleSpace.load(path)
    except OSError as exc:
        raise CliError(f"cannot read {path}: {exc}", EXIT_IO) from exc
    except SpaceFormatError as exc:
        raise CliError(f"{path}: {exc}", EXIT_IO) from exc


def _emit(text: str, out: str | None) -> None:
    if out:
        Path(out).write_text(text)
    else:
        sys.stdout.write(text)


def _independence_text(rep: IndependenceReport) -> str:
    if rep.holds:
        return "INDEPENDENT"
    ce = rep.counterexample
    return (
        f"NOT {rep.d}-WISE INDEPENDENT\n"
        f"subset={list(ce.subset)} values={list(ce.values)} joint={ce.lhs} product={ce.rhs}"
    )


def _independence_dict(rep: IndependenceReport) -> dict:
    ce = rep.counterexample
    return {
        "d": rep.d,
        "holds": rep.holds,
        "counterexample": None
        if ce is None
        else {"subset": list(ce.subset), "values": list(ce.values), "lhs": str(ce.lhs), "rhs": str(ce.rhs)},
    }


def _check_caps(space: SampleSpace, d: int) -> None:
    if math.comb(space.n, d) * space.k**d > MAX_CHECKS:
        raise CliError(f"check cap exceeded: C(n,d)*k^d > {MAX_CHECKS}")


# -- subcommands --------------------------------------------------------------


def cmd_construct(args) -> int:
    params = {"m": args.m, "q": args.q, "l": args.l, "t": args.t, "d": args.d}
    if args.family == "xor-lift":
        if not args.input:
            raise CliError("xor-lift needs --input SPACE.json")
        params["input"] = _load_space(args.input)
    try:
        c = build_construction(args.family, **params)
    except ValueError as exc:
        raise CliError(f"invalid parameters for {args.family}: {exc}") from exc
    if args.out:
        c.space.save(args.out)
    if args.matrix_out:
        if c.matrix is None:
            raise CliError(f"family {args.family} has no generator matrix")
        c.matrix.save(args.matrix_out)
    hmin = min_entropy(c.space)
    if args.format == "json":
        print(json.dumps({"family": c.family, "params": c.params, "n": c.space.n, "d": c.d,
                          "support_size": c.space.m, "min_entropy": hmin, "out": args.out}))
    else:
        print(f"n={c.space.n} d={c.d} Hmin={hmin:.6f} support={c.space.m}")
    return EXIT_OK


def cmd_verify(args) -> int:
    space = _load_space(args.space)
    if not 1 <= args.d <= space.n:
        raise CliError(f"d must satisfy 1 <= d <= n={space.n}")
    _check_caps(space, args.d)
    rep = check_dwise_independence(space, args.d)
    if args.format == "json":
        print(json.dumps(_independence_dict(rep)))
    else:
        print(_independence_text(rep))
    return EXIT_OK if rep.holds else EXIT_FAIL


def cmd_analyze(args) -> int:
    space = _load_space(args.space)
    info = {
        "n": space.n,
        "k": space.k,
        "support_size": space.m,
        "shannon_entropy": shannon_entropy(space),
        "min_entropy": min_entropy(space),
        "max_point_probability": str(max_point_probability(space)),
        "marginals": [[str(p) for p in marginal(space, j).probs] for j in range(space.n)],
    }
    code = EXIT_OK
    if args.d is not None:
        if not 1 <= args.d <= space.n:
            raise CliError(f"d must satisfy 1 <= d <= n={space.n}")
        _check_caps(space, args.d)
        rep = check_dwise_independence(space, args.d)
        info["independence"] = _independence_dict(rep)
        if rep.holds and args.d >= 2:
            try:
                info["report"] = tightness_report(space, args.d, "file", {"path": args.space}, True).to_dict()
            except ValueError as exc:
                info["bound_violation"] = str(exc)
                code = EXIT_FAIL
        elif not rep.holds:
            code = EXIT_FAIL
    if args.format == "json":
        print(json.dumps(info))
    else:
        print(f"n={space.n} k={space.k} support={space.m}")
        print(f"H={info['shannon_entropy']:.9f} Hmin={info['min_entropy']:.9f} max_p={info['max_point_probability']}")
        if "independence" in info:
            print(_independence_text(rep))
        for b in info.get("report", {}).get("bounds", []):
            print(f"  {b['bound_name']}: {b['value_bits']:.6f} (gap {b['gap_bits']:.6f})")
        if "report" in info:
            print(f"verdict: {info['report']['verdict']}")
        if "bound_violation" in info:
            print(f"BOUND VIOLATED: {info['bound_violation']}")
    return code


def cmd_bounds(args) -> int:
    reports: list[B.BoundReport] = []
    n, d = args.n, args.d
    try:
        if args.w is not None:
            reports.append(B.min_entropy_bound_finite(n, args.k or 2, args.w))
        else:
            if args.q_list is not None:
                q = [_rational(x) for x in args.q_list.split(",")]
                n = len(q)
            else:
                q = [args.q if args.q is not None else Fraction(1, 2)] * n
            reports.append(B.entropy_bound_pairwise(q))
            if len(set(q)) == 1 and q[0] <= Fraction(1, 2):
                reports.append(B.entropy_bound_pairwise_uniform_q(n, q[0]))
            reports.append(B.min_entropy_bound_pairwise(q))
            if all(x == Fraction(1, 2) for x in q) and 2 <= d <= n:
                reports.append(B.min_entropy_bound_dwise(n, d))
    except ValueError as exc:
        raise CliError(f"invalid bound parameters: {exc}") from exc
    if args.format == "json":
        print(json.dumps([r.to_dict() for r in reports]))
    else:
        for r in reports:
            extra = ""
            if "t_star" in r.parameters:
                t = r.parameters["t_star"]
                extra = " t*=->0 (boundary)" if t is None else f" t*={t:.9g}"
            print(f"{r.bound_name} n={r.n} d={r.d} value={r.value_bits:.6f}{extra}")
    return EXIT_OK


_SWEEP_KEYS = ("m", "q", "l", "t")


def cmd_report(args) -> int:
    grids = {key: getattr(args, key) for key in _SWEEP_KEYS if getattr(args, key) is not None}
    combos: list[dict] = [{}]
    for key, vals in grids.items():
        combos = [dict(c, **{key: v}) for c in combos for v in vals]
    rows = []
    for params in combos:
        try:
            est = _estimated_support(args.family, params)
            if est is not None and est > MAX_SUPPORT:
                raise CliError(f"support cap exceeded: {est} > {MAX_SUPPORT} points for {params}")
            c = build_construction(args.family, **params)
        except ValueError as exc:
            raise CliError(f"invalid parameters {params}: {exc}") from exc
        independent = None
        if args.verify:
            _check_caps(c.space, c.d)
            independent = check_dwise_independence(c.space, c.d).holds
        try:
            rows.append(tightness_report(c.space, c.d, c.family, c.params, independent))
        except ValueError as exc:
            raise CliError(f"bound violated for {params}: {exc}") from exc

    if args.format == "json":
        text = json.dumps([r.to_dict() for r in rows], indent=2) + "\n"
    elif args.format == "csv":
        dicts = [r.csv_row() for r in rows]
        fields: list[str] = []
        for dct in dicts:
            fields += [f for f in dct if f not in fields]
        buf = io.StringIO()
        writer = csv.DictWriter(buf, fields, lineterminator="\n")
        writer.writeheader()
        writer.writerows(dicts)
        text = buf.getvalue()
    else:
        lines = []
        for r in rows:
            best = r.best_bound
            ps = " ".join(f"{k}={v}" for k, v in r.params.items())
            lines.append(
                f"{r.construction} {ps} n={r.n} d={r.d} support={r.support_size} "
                f"Hmin={r.min_entropy:.6f} bound={best.value_bits:.6f} ({best.bound_name}) "
                f"gap={r.best_gap:.6f} verdict={r.verdict}"
                + ("" if r.independent is None else f" independent={r.independent}")
            )
        text = "\n".join(lines) + "\n"
    _emit(text, args.out)
    bad = [r for r in rows if r.independent is False]
    return EXIT_FAIL if bad else EXIT_OK


def _estimated_support(family: str, p: dict) -> int | None:
    m, t, l, q = p.get("m"), p.get("t"), p.get("l"), p.get("q")
    if family == "hadamard-sylvester" and m is not None:
        return 1 << m
    if family == "hadamard-paley" and q is not None:
        return q + 1
    if family == "pairwise" and m is not None:
        return 1 << m
    if family == "threewise" and l is not None:
        return 1 << (l + 1)
    if family == "bch-even" and m is not None and t is not None:
        return 1 << (m * t)
    if family == "bch-odd" and m is not None and t is not None:
        return 1 << (m * t + 1)
    return None


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="kwise", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    fmt = argparse.ArgumentParser(add_help=False)
    fmt.add_argument("--format", choices=("text", "json", "csv"), default="text")

    p = sub.add_parser("construct", parents=[fmt], help="build a sample space")
    p.add_argument("--family", required=True, choices=sorted(FAMILIES))
    for key in ("m", "q", "l", "t", "d"):
        p.add_argument(f"--{key}", type=int)
    p.add_argument("--input", help="input space for xor-lift")
    p.add_argument("--out", help="sample-space JSON output path")
    p.add_argument("--matrix-out", help="generator matrix text output path")
    p.set_defaults(func=cmd_construct)

    p = sub.add_parser("verify", parents=[fmt], help="exhaustively check d-wise independence")
    p.add_argument("space")
    p.add_argument("--d", type=int, required=True)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("analyze", parents=[fmt], help="entropies, marginals, optional bound report")
    p.add_argument("space")
    p.add_argument("--d", type=int)
    p.set_defaults(func=cmd_analyze)

    p = sub.add_parser("bounds", parents=[fmt], help="evaluate lower bounds")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--d", type=int, default=2)
    p.add_argument("--q", type=_rational, help="common Pr[X_j=1], as num/den")
    p.add_argument("--q-list", help="comma-separated per-variable Pr[X_j=1]")
    p.add_argument("--k", type=int, help="alphabet size for the finite-outcome bound")
    p.add_argument("--w", type=_rational, help="cap on every value probability")
    p.set_defaults(func=cmd_bounds)

    p = sub.add_parser("report", parents=[fmt], help="tightness table over a parameter sweep")
    p.add_argument("--family", required=True, choices=sorted(set(FAMILIES) - {"xor-lift"}))
    for key in _SWEEP_KEYS:
        p.add_argument(f"--{key}", type=_int_range)
    p.add_argument("--verify", action="store_true", help="also run the exhaustive independence check")
    p.add_argument("--out")
    p.set_defaults(func=cmd_report)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_IO if exc.code else EXIT_OK
    try:
        return args.func(args)
    except CliError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return exc.code
    except (MatrixFormatError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
