"""Command-line front end.

Exit codes: 0 success, 1 hypothesis/domain violation, 2 numerical
non-convergence, 3 a checked inequality or identity failed, 64 usage error.
"""

from __future__ import annotations

import argparse
import math
import sys
from typing import Sequence

import numpy as np

from . import constants, profiles
from .errors import DomainError, HypothesisViolation, NonConvergence, ZeroNorm
from .operator import SeparableRadialFunction, hardy_separable
from .params import Mode, make_params, parse_axes, parse_number
from .quadrature import DEFAULT_SPEC, QuadratureSpec, log_grid
from .verify import (
    FAMILIES,
    extremizer_thm1,
    extremizer_thm2,
    random_test_function,
    ratio,
    reduction_check,
    run_batch,
    sweep_q_to_p,
    to_csv,
    to_json,
)

EXIT_OK = 0
EXIT_HYPOTHESIS = 1
EXIT_NONCONVERGENCE = 2
EXIT_CHECK_FAILED = 3
EXIT_USAGE = 64

CONSTANT_MODES = ("thm1", "thm2", "lemma2", "limit", "thmA", "thmB", "thmC")
# 20 (p, q) points with p in {1.5, 2, 3} and p < q <= 6
WLY_LATTICE = tuple(
    (p, float(q))
    for p, count in ((1.5, 7), (2.0, 7), (3.0, 6))
    for q in np.linspace(p, 6.0, count + 1)[1:]
)


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{self.prog}: {message}")


def _number(text: str) -> float:
    try:
        return parse_number(text)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from exc


def _number_list(text: str) -> list[float]:
    return [_number(x) for x in text.split(",") if x.strip()]


def _add_common(p: argparse.ArgumentParser, mode_choices=("thm1", "thm2", "lemma2", "limit"), mode_default="thm2"):
    p.add_argument("--mode", choices=mode_choices, default=mode_default)
    p.add_argument("--p", type=_number, help="source exponent, decimal or fraction")
    p.add_argument("--q", type=_number, help="target exponent (derived when the mode fixes it)")
    p.add_argument("--axes", help='comma-separated "n:beta:gamma[:alpha]" axes')
    p.add_argument("--rel-tol", type=float, default=DEFAULT_SPEC.rel_tol)
    p.add_argument("--grid-points", type=int, default=DEFAULT_SPEC.grid_points)
    p.add_argument("--format", choices=("csv", "json", "table"))
    p.add_argument("--out", metavar="PATH")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="hardy-sharp", description="Sharp constants for product-space fractional Hardy operators.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    c = sub.add_parser("constant", help="closed-form sharp constants")
    _add_common(c, CONSTANT_MODES)
    c.add_argument("--n", type=int, help="dimension (thmB)")
    c.add_argument("--beta", type=_number, help="fractional order (thmB)")
    c.add_argument("--alpha", type=_number, help="weight exponent (thmA)")

    v = sub.add_parser("verify", help="norm ratio against the sharp constant")
    _add_common(v)
    v.add_argument("--function", choices=("extremal", "indicator", "random"), default="extremal")
    v.add_argument("--family", choices=FAMILIES, default="powerBump")
    v.add_argument("--seed", type=int, default=0)
    v.add_argument("--count", type=int, default=1, help="number of consecutive seeds for --function random")
    v.add_argument("--d-scale", type=float, default=1.0, help="multiplier on the extremizer's d constants (thm2)")

    e = sub.add_parser("extremal", help="sample the extremizer and its image on a log grid")
    _add_common(e)
    e.add_argument("--points", type=int, default=25)
    e.add_argument("--r-min", type=float, default=1e-3)
    e.add_argument("--r-max", type=float, default=1e3)

    s = sub.add_parser("sweep", help="two-weight constant as q approaches p")
    _add_common(s, ("thm2", "limit"), "limit")
    s.add_argument("--n", type=int, default=1)
    s.add_argument("--gamma", type=_number, default=0.0)
    s.add_argument("--m", type=int, default=1, help="number of identical axes when --axes is absent")
    s.add_argument("--eps", type=_number_list, default=[1e-1, 1e-2, 1e-3])

    r = sub.add_parser("reduce", help="spherical-mean reduction check (m = 2, n <= 3)")
    _add_common(r)
    r.add_argument("--seed", type=int, default=0)
    r.add_argument("--seeds", type=int, default=1, help="number of consecutive seeds")
    r.add_argument("--samples", type=int, default=100_000)
    r.add_argument("--radial", action="store_true", help="drop the angular perturbation")

    w = sub.add_parser("compare-wly", help="sharp constant against the earlier power-weight bound")
    _add_common(w)
    w.add_argument("--lattice", action="store_true", help="run the built-in (p, q) lattice with m = 1, gamma = 0")
    return parser


# --------------------------------------------------------------------------


def _spec(args) -> QuadratureSpec:
    return QuadratureSpec(rel_tol=args.rel_tol, grid_points=args.grid_points)


def _params(args, mode=None):
    if args.p is None:
        raise UsageError("--p is required")
    if not args.axes:
        raise UsageError("--axes is required")
    try:
        axes = parse_axes(args.axes)
    except ValueError as exc:
        raise UsageError(str(exc)) from exc
    return make_params(axes, args.p, args.q, mode or args.mode)


def _factor_fields(factors):
    return {f"factor{i}": v for i, v in enumerate(factors)}


def cmd_constant(args):
    mode = args.mode
    if mode == "thmA":
        if args.p is None:
            raise UsageError("--p is required")
        alpha = args.alpha or 0.0
        return [{"mode": mode, "p": args.p, "alpha": alpha, "value": constants.thmA_constant(args.p, alpha)}]
    if mode == "thmB":
        if None in (args.n, args.p, args.beta):
            raise UsageError("thmB needs --n, --p and --beta")
        q = 1 / (1 / args.p - args.beta / args.n) if 1 / args.p > args.beta / args.n else math.inf
        return [{"mode": mode, "n": args.n, "p": args.p, "beta": args.beta, "q": q,
                 "value": constants.thmB_constant(args.n, args.p, args.beta)}]
    if mode == "thmC":
        params = _params(args, "thm2")
        for i, ax in enumerate(params.axes):
            if ax.n != 1 or ax.beta != 0:
                raise DomainError(f"axis {i}: thmC needs one-dimensional axes with beta = 0")
        eq4, eq5 = constants.thmC_constants(params.p, params.q, [a.gamma for a in params.axes],
                                            [a.alpha for a in params.axes])
        return [{"mode": mode, "params": params.describe(), "eq4": eq4, "eq5": eq5}]
    params = _params(args)
    res = constants.mode_constant(params)
    rec = {"mode": res.mode, "params": params.describe(), "value": res.value, "formulaId": res.formula_id}
    rec.update(_factor_fields(res.per_axis_factors))
    return [rec]


def _verify_gap_ok(rep) -> bool:
    return rep.ratio <= rep.constant * (1 + 1e-8 + rep.quad_err_est)


def cmd_verify(args):
    params = _params(args)
    spec = _spec(args)
    if args.function == "extremal":
        f = extremizer_thm1(params) if params.mode is Mode.THM1 else extremizer_thm2(params, args.d_scale)
        jobs = [lambda: ratio(f, params, spec, "extremal")]
    elif args.function == "indicator":
        f = SeparableRadialFunction(tuple(profiles.indicator(1.0) for _ in params.axes))
        jobs = [lambda: ratio(f, params, spec, "indicator")]
    else:
        def job(seed):
            return lambda: ratio(random_test_function(seed, params, args.family), params, spec,
                                 f"random-{args.family}-{seed}", seed)

        jobs = [job(args.seed + k) for k in range(max(1, args.count))]
    reports = run_batch(jobs)
    ok = all(_verify_gap_ok(r) for r in reports)
    return [r.as_record() for r in reports], ok


def cmd_extremal(args):
    params = _params(args)
    spec = _spec(args)
    f = extremizer_thm1(params) if params.mode is Mode.THM1 else extremizer_thm2(params)
    h = hardy_separable(f, params, spec)
    nodes = log_grid(args.r_min, args.r_max, args.points)
    rows = []
    for i, (fp, hp) in enumerate(zip(f.axis_profiles, h.axis_profiles)):
        fv, hv = fp(nodes), hp(nodes)
        for r, a, b in zip(nodes, fv, hv):
            rows.append({"axis": i, "r": float(r), "f": float(a), "Hf": float(b)})
    return rows


def cmd_sweep(args):
    if args.p is None:
        raise UsageError("--p is required")
    if args.axes:
        axes = parse_axes(args.axes)
    else:
        axes = [(args.n, 0.0, args.gamma)] * max(1, args.m)
    base = make_params(axes, args.p, args.p, "limit")
    rows = sweep_q_to_p(base, args.eps)
    return [{"eps": r.eps, "q": r.q, "constant": r.constant, "limit": r.limit, "gap": r.gap} for r in rows]


def cmd_reduce(args):
    params = _params(args)
    spec = _spec(args)
    seeds = [args.seed + k for k in range(max(1, args.seeds))]
    reports = run_batch([
        (lambda s=s: reduction_check(params, s, args.samples, spec, radial=args.radial)) for s in seeds])
    rows = [{
        "seed": r.seed, "samples": r.samples, "maxZ": r.max_z, "normG": r.norm_g, "normF": r.norm_f,
        "normFSe": r.norm_f_se, "identityOk": r.identity_ok, "contractionOk": r.contraction_ok,
    } for r in reports]
    return rows, all(r.passed for r in reports)


def _wly_record(params):
    cmp = constants.compare_wly(params)
    return {"p": params.p, "q": params.q, "params": params.describe(), "sharp": cmp.sharp, "eq5": cmp.eq5,
            "ratio": cmp.ratio, "gap": cmp.gap, "halfLineSharp": cmp.half_line_sharp, "r": cmp.r}


def cmd_compare_wly(args):
    if args.lattice:
        recs = [_wly_record(make_params([(1, 0.0, 0.0)], p, float(q), "thm2")) for p, q in WLY_LATTICE]
    else:
        recs = [_wly_record(_params(args, "thm2"))]
    return recs, all(r["sharp"] <= r["eq5"] * (1 + 1e-12) for r in recs)


COMMANDS = {
    "constant": cmd_constant,
    "verify": cmd_verify,
    "extremal": cmd_extremal,
    "sweep": cmd_sweep,
    "reduce": cmd_reduce,
    "compare-wly": cmd_compare_wly,
}


def _table(records) -> str:
    if not records:
        return ""
    cols = list(records[0].keys())

    def cell(v):
        if isinstance(v, float):
            return format(v, ".10g")
        return str(v)

    rows = [[cell(r.get(c)) for c in cols] for r in records]
    widths = [max(len(c), *(len(row[i]) for row in rows)) for i, c in enumerate(cols)]
    lines = ["  ".join(c.ljust(w) for c, w in zip(cols, widths))]
    lines += ["  ".join(v.ljust(w) for v, w in zip(row, widths)) for row in rows]
    return "\n".join(line.rstrip() for line in lines) + "\n"


def _emit(records, fmt, out_path):
    if fmt is None:
        sink_tty = out_path is None and sys.stdout.isatty()
        fmt = "table" if sink_tty else "json"
    if fmt == "json":
        text = to_json(records)
    elif fmt == "csv":
        text = to_csv(records)
    else:
        text = _table(records)
    if out_path:
        with open(out_path, "w", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def run(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        result = COMMANDS[args.command](args)
    except UsageError as exc:
        print(exc, file=sys.stderr)
        return EXIT_USAGE
    except (HypothesisViolation, DomainError, ZeroNorm) as exc:
        print(f"hypothesis violation: {exc}", file=sys.stderr)
        return EXIT_HYPOTHESIS
    except NonConvergence as exc:
        print(f"non-convergence: {exc}", file=sys.stderr)
        return EXIT_NONCONVERGENCE
    except ValueError as exc:
        print(f"invalid input: {exc}", file=sys.stderr)
        return EXIT_USAGE
    ok = True
    if isinstance(result, tuple):
        result, ok = result
    _emit(result, args.format, args.out)
    if not ok:
        print("check failed: see the emitted report", file=sys.stderr)
        return EXIT_CHECK_FAILED
    return EXIT_OK


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
