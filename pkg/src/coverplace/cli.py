"""coverplace command line.

Exit codes: 0 success, 1 verification failure, 2 usage error, 3 size guard.
Every file written starts with a ``#``-prefixed JSON manifest line.
"""

from __future__ import annotations

import argparse
import datetime as _dt
import json
import math
import sys
from pathlib import Path

import numpy as np

from . import __version__, catalog
from .cost_exact import expected_cost_dp, expected_cost_enumeration
from .lp_formulation import LP_LIMIT, build_lp, export_lp_text
from .model import Cortes, CoverError, Geometry, Independent, TooLarge, make_placement

SCHEMA_VERSION = 1
EXIT_OK, EXIT_VERIFY, EXIT_USAGE, EXIT_SIZE = 0, 1, 2, 3


class UsageError(Exception):
    pass


def fmt(v: float) -> str:
    return format(float(v), ".12g")


def manifest(command: str, params: dict, seed=None) -> dict:
    return {
        "command": command,
        "parameters": params,
        "seed": seed,
        "generator": catalog.GENERATOR_ID,
        "version": __version__,
        "schema": SCHEMA_VERSION,
        "timestamp": _dt.datetime.now(_dt.timezone.utc).isoformat(timespec="seconds"),
    }


def write_output(path: str | None, head: dict, lines: list[str]) -> None:
    text = "# " + json.dumps(head, sort_keys=True) + "\n" + "".join(line + "\n" for line in lines)
    if path is None or path == "-":
        sys.stdout.write(text)
    else:
        Path(path).write_text(text)


def _model(args, n: int):
    if getattr(args, "cortes", None) is not None:
        return Cortes(args.cortes, n)
    if args.p is None:
        raise UsageError("give --p or --cortes")
    return Independent(args.p)


def _placement(args):
    choice = args.placement
    if choice.startswith("file:"):
        try:
            raw = json.loads(Path(choice[5:]).read_text())
        except (OSError, ValueError) as exc:
            raise UsageError(f"cannot read placement file: {exc}") from exc
        if isinstance(raw, dict):
            raw = raw.get("positions")
        if not isinstance(raw, list):
            raise UsageError("placement file must hold a list of numbers")
        pl = make_placement(raw)
        if args.n is not None and args.n != pl.n:
            raise UsageError(f"--n {args.n} does not match the {pl.n} positions in the file")
        return pl
    if args.n is None:
        raise UsageError("--n is required for named placements")
    return catalog.make_named(choice, args.n, k=args.k, seed=args.seed).placement


def cmd_eval(args) -> int:
    pl = _placement(args)
    model = _model(args, pl.n)
    if args.method == "enum":
        rep = expected_cost_enumeration(pl, model, args.geometry)
    else:
        rep = expected_cost_dp(pl, model, args.geometry)
    out = {
        "manifest": manifest("eval", _params(args), args.seed),
        "positions": pl.positions.tolist(),
        **rep.as_dict(),
    }
    print(json.dumps(out, indent=2))
    return EXIT_OK


def cmd_optimize(args) -> int:
    from .optimizer import canonical, optimize_cutting_plane, optimize_lp

    model = _model(args, args.n)
    gap = 0.0
    if args.method == "lp":
        pl, cost = optimize_lp(args.n, model, args.geometry)
    else:
        pl, cost, gap = optimize_cutting_plane(args.n, model, args.geometry, gap_tol=args.gap_tol)
    out = {
        "manifest": manifest("optimize", _params(args)),
        "positions": canonical(pl, args.geometry).tolist(),
        "expected_cost": cost,
        "certified_gap": gap,
    }
    print(json.dumps(out, indent=2))
    return EXIT_OK


def cmd_sweep(args) -> int:
    from .optimizer import sweep_p

    if not 0.0 < args.p_min < args.p_max < 1.0:
        raise UsageError("need 0 < p-min < p-max < 1")
    if args.steps < 1:
        raise UsageError("--steps must be >= 1")
    grid = np.linspace(args.p_min, args.p_max, args.steps)
    res = sweep_p(args.n, grid, args.geometry, match_tol=args.match_tol)
    cols = ["p"] + [f"x{i + 1}" for i in range(args.n)] + ["cost", "segment_id"]
    lines = [",".join(cols)]
    for i, p in enumerate(res.p_grid):
        row = [fmt(p)] + [fmt(v) for v in res.placements[i]] + [fmt(res.costs[i]), str(int(res.segment_ids[i]))]
        lines.append(",".join(row))
    write_output(args.out, manifest("sweep", _params(args)), lines)
    return EXIT_OK


def cmd_random_study(args) -> int:
    from .random_placement import expected_cost_random, monte_carlo_expected_cost, theorem3_asymptote
    from .run_statistics import expected_cost_equispaced, theorem2_asymptote

    if not 0.0 <= args.p < 1.0:
        raise UsageError("--p must lie in [0, 1)")
    try:
        ns = [int(v) for v in args.n_list.split(",") if v.strip()]
    except ValueError as exc:
        raise UsageError(f"bad --n-list: {exc}") from exc
    if not ns or min(ns) < 2:
        raise UsageError("--n-list needs integers >= 2")
    if args.reps < 2:
        raise UsageError("--reps must be >= 2")
    lines = ["n,mc_estimate,mc_stderr,exact_mixture,equispaced_cost,thm2_asymptote,thm3_asymptote"]
    for n in ns:
        est, se = monte_carlo_expected_cost(n, args.p, args.reps, args.seed)
        t2 = theorem2_asymptote(n, args.p) if args.p > 0 else math.nan
        row = [
            str(n),
            fmt(est),
            fmt(se),
            fmt(expected_cost_random(n, args.p)),
            fmt(expected_cost_equispaced(n, args.p)),
            fmt(t2),
            fmt(theorem3_asymptote(n, args.p)),
        ]
        lines.append(",".join(row))
    write_output(args.out, manifest("random-study", _params(args), args.seed), lines)
    return EXIT_OK


def cmd_export_lp(args) -> int:
    if args.n > LP_LIMIT:
        raise TooLarge(f"LP export limited to n <= {LP_LIMIT}")
    lp = build_lp(args.n, _model(args, args.n), args.geometry)
    head = manifest("export-lp", _params(args))
    text = "\\ " + json.dumps(head, sort_keys=True) + "\n" + export_lp_text(lp)
    if args.out in (None, "-"):
        sys.stdout.write(text)
    else:
        Path(args.out).write_text(text)
    return EXIT_OK


def cmd_cortes(args) -> int:
    from .cortes import theorem5_checks

    rep = theorem5_checks(args.n, args.k)
    out = {"manifest": manifest("cortes", _params(args)), **{k: v for k, v in vars(rep).items()}, "ok": rep.ok}
    print(json.dumps(out, indent=2, default=float))
    return EXIT_OK if rep.ok else EXIT_VERIFY


def cmd_verify(args) -> int:
    from .verify import run_suite

    print(f"coverplace {__version__} verify --suite {args.suite} --seed {args.seed}")
    results = run_suite(args.suite, args.seed, on_result=lambda r: print(r.line(), flush=True))
    failed = [r for r in results if not r.passed]
    print(f"{len(results) - len(failed)}/{len(results)} checks passed")
    return EXIT_VERIFY if failed else EXIT_OK


def _params(args) -> dict:
    return {k: v for k, v in sorted(vars(args).items()) if k not in ("func", "out")}


def _prob(text: str) -> float:
    v = float(text)
    if not 0.0 <= v <= 1.0:
        raise argparse.ArgumentTypeError(f"probability must lie in [0, 1], got {text}")
    return v


def _positive(text: str) -> int:
    v = int(text)
    if v < 1:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {text}")
    return v


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="coverplace", description="Sensor placement under random failures.")
    ap.add_argument("--version", action="version", version=f"coverplace {__version__}")
    sub = ap.add_subparsers(dest="command", required=True)

    def failure_args(sp, required_n=True):
        sp.add_argument("--n", type=_positive, required=required_n)
        g = sp.add_mutually_exclusive_group()
        g.add_argument("--p", type=_prob, help="independent failure probability")
        g.add_argument("--cortes", type=int, metavar="K", help="exactly K sensors fail")
        sp.add_argument("--geometry", choices=[g.value for g in Geometry], default="interval")

    sp = sub.add_parser("eval", help="expected cost of a placement")
    sp.add_argument("--placement", required=True, help="eq, sgl, alt, three, rand or file:<path.json>")
    failure_args(sp, required_n=False)
    sp.add_argument("--method", choices=["dp", "enum"], default="dp")
    sp.add_argument("--k", type=int, help="cluster size for 'three'")
    sp.add_argument("--seed", type=int, help="seed for 'rand'")
    sp.set_defaults(func=cmd_eval)

    sp = sub.add_parser("optimize", help="optimal placement for one failure law")
    failure_args(sp)
    sp.add_argument("--method", choices=["lp", "cutting-plane"], default="lp")
    sp.add_argument("--gap-tol", type=float, default=1e-6)
    sp.set_defaults(func=cmd_optimize)

    sp = sub.add_parser("sweep", help="optimal placements over a grid of p")
    sp.add_argument("--n", type=_positive, required=True)
    sp.add_argument("--p-min", type=float, required=True)
    sp.add_argument("--p-max", type=float, required=True)
    sp.add_argument("--steps", type=int, default=200)
    sp.add_argument("--geometry", choices=[g.value for g in Geometry], default="interval")
    sp.add_argument("--match-tol", type=float, default=1e-5)
    sp.add_argument("--out")
    sp.set_defaults(func=cmd_sweep)

    sp = sub.add_parser("random-study", help="random versus equispaced placement")
    sp.add_argument("--p", type=float, default=0.3)
    sp.add_argument("--n-list", default="50,100,200,500,1000,2000,5000")
    sp.add_argument("--reps", type=int, default=100)
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--out")
    sp.set_defaults(func=cmd_random_study)

    sp = sub.add_parser("export-lp", help="write the epigraph LP in CPLEX LP format")
    failure_args(sp)
    sp.add_argument("--out")
    sp.set_defaults(func=cmd_export_lp)

    sp = sub.add_parser("cortes", help="fixed failure count checks")
    sp.add_argument("--n", type=_positive, required=True)
    sp.add_argument("--k", type=int, required=True)
    sp.set_defaults(func=cmd_cortes)

    sp = sub.add_parser("verify", help="run the verification suite")
    sp.add_argument("--suite", choices=["fast", "full"], default="fast")
    sp.add_argument("--seed", type=int, default=0)
    sp.set_defaults(func=cmd_verify)
    return ap


def main(argv=None) -> int:
    ap = build_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as exc:  # argparse: 2 on bad flags, 0 on --help
        return int(exc.code or 0)
    try:
        return args.func(args)
    except TooLarge as exc:
        print(f"coverplace: size guard: {exc}", file=sys.stderr)
        return EXIT_SIZE
    except (UsageError, CoverError, ValueError) as exc:
        print(f"coverplace: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
