"""Command-line front end.

Exit codes: 0 ok, 1 negative result, 2 tolerance failure, 3 inconclusive,
64 usage error, 65 malformed input data.
"""

from __future__ import annotations

import argparse
import csv
import json
import logging
import math
import os
import sys
import time
from dataclasses import replace
from pathlib import Path

import numpy as np

from . import __version__
from .admissibility import GridSpec, g_margin, G_FORMS, margin_trace, min_exclusion
from .analytic import CoefficientFormatError, load_coefficients
from .bounds import (
    CONSTANT_TOL,
    EQUATIONS,
    EXAMPLES,
    RESIDUAL_TOL,
    NoSignChange,
    UnknownTheorem,
    constants_table,
    instances,
    solve_root,
    theorem,
    theorem_bound,
    typo_flags,
)
from .psi import CATALOG, UnknownPsi, psi
from .regions import FOLDED, PRINCIPAL, RegionSpecError, boundary_point, parse_region, region_to_spec
from .subordination import (
    DEFAULT_SEED,
    FAILS,
    HOLDS,
    SamplingGrid,
    implication_test,
    make_corpus,
    parse_corpus,
    standard_corpus,
    starlike_e_membership,
)

EXIT_OK, EXIT_NEGATIVE, EXIT_TOLERANCE, EXIT_INCONCLUSIVE = 0, 1, 2, 3
EXIT_USAGE, EXIT_DATA = 64, 65
SEED_ENV = "SUBORDLAB_SEED"

log = logging.getLogger("subordlab")


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _jsonable(obj):
    if isinstance(obj, dict):
        return {str(k): _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    if isinstance(obj, complex):
        return [obj.real, obj.imag]
    if isinstance(obj, (np.floating, np.integer)):
        return obj.item()
    if isinstance(obj, float) and not math.isfinite(obj):
        return str(obj)
    return obj


def run_report(command: list[str], config: dict, results, wall_time: float) -> dict:
    return {
        "command": command,
        "config": _jsonable(config),
        "results": _jsonable(results),
        "wall_time": wall_time,
        "version": __version__,
    }


def _write_json(path: str | None, payload) -> None:
    if path:
        Path(path).write_text(json.dumps(payload, indent=2, sort_keys=True) + "\n", encoding="utf-8")


def _seed(args) -> int:
    if args.seed is not None:
        return args.seed
    env = os.environ.get(SEED_ENV)
    if env:
        try:
            return int(env, 0)
        except ValueError:
            raise UsageError(f"{SEED_ENV}={env!r} is not an integer") from None
    return DEFAULT_SEED


def _grid(args) -> GridSpec:
    return GridSpec(
        theta_points=args.theta_points,
        m_points=args.m_points,
        m_max=args.m_max,
        nu_re_window=args.nu_window,
        nu_im_window=args.nu_window,
        refine_tol=args.refine_tol,
        jobs=args.jobs,
    )


def _expr(args):
    try:
        return psi(args.psi, beta=args.beta, n=args.n, alpha=args.alpha)
    except UnknownPsi:
        raise UsageError(f"unknown psi id {args.psi!r}; known: {', '.join(CATALOG)}") from None
    except ValueError as exc:
        raise UsageError(str(exc)) from None


def _region(spec: str):
    try:
        return parse_region(spec)
    except (RegionSpecError, ValueError) as exc:
        raise UsageError(f"bad region spec: {exc}") from None


def _warn_unused(args, expr):
    entry = CATALOG[expr.psi_id]
    for name in ("beta", "n", "alpha"):
        if getattr(args, name, None) is not None and name not in entry.params:
            log.warning("%s takes no %s; the flag is ignored", expr.psi_id, name)


# --- commands -----------------------------------------------------------------


def cmd_constants(args) -> int:
    t0 = time.perf_counter()
    rows = constants_table()
    flags = typo_flags()
    worst = max(r.abs_diff for r in rows)
    if args.json:
        payload = {"rows": [r.as_dict() for r in rows], "typo_flags": [f.as_dict() for f in flags], "tol": args.tol}
        print(json.dumps(_jsonable(payload), indent=2))
    else:
        print(f"{'id':8s} {'computed':>18s} {'printed':>10s} {'abs_diff':>10s}  params")
        for r in rows:
            params = ",".join(f"{k}={v}" for k, v in r.params.items())
            print(f"{r.theorem_id:8s} {r.computed:18.12f} {r.paper_value:10.6g} {r.abs_diff:10.2e}  {params}")
        print("\nflagged discrepancies:")
        for f in flags:
            print(f"  {f.theorem_id} ({f.kind}): statement {f.statement} | proof {f.proof} -> {f.resolution}")
    _write_json(args.out, run_report(args.argv, {"tol": args.tol, "seed": _seed(args)},
                                     {"rows": [r.as_dict() for r in rows], "typo_flags": [f.as_dict() for f in flags]},
                                     time.perf_counter() - t0))
    return EXIT_OK if worst <= args.tol else EXIT_TOLERANCE


def _admissible_target(args):
    if args.theorem:
        try:
            thm = theorem(args.theorem)
        except UnknownTheorem:
            raise UsageError(f"unknown theorem {args.theorem!r}") from None
        beta = args.beta if args.beta is not None else theorem_bound(thm.theorem_id, args.n, args.alpha)
        expr = psi(thm.psi_id, beta=beta, n=args.n, alpha=args.alpha)
        region = thm.region(args.alpha if args.alpha is not None else 0.0) if args.region is None else _region(args.region)
        return expr, region
    if not args.psi:
        raise UsageError("admissible needs --psi or --theorem")
    expr = _expr(args)
    _warn_unused(args, expr)
    if args.region is None:
        if expr.psi_id in EXAMPLES:
            return expr, EXAMPLES[expr.psi_id].region()
        raise UsageError("--region is required for this psi")
    return expr, _region(args.region)


def cmd_admissible(args) -> int:
    t0 = time.perf_counter()
    try:
        expr, region = _admissible_target(args)
    except (ValueError, TypeError) as exc:
        if isinstance(exc, UsageError):
            raise
        raise UsageError(str(exc)) from None
    grid = _grid(args)
    rep = min_exclusion(expr, region, grid=grid, branch=args.branch)
    pt = rep.argmin
    verdict = "admissible" if rep.admissible else "NOT admissible"
    print(f"{expr.label()} on {region}: {verdict}")
    print(f"  min_margin = {rep.min_margin:.12g}  (tol {grid.tol:g}, branch {args.branch})")
    print(f"  argmin theta = {pt.theta:.12g}, m = {pt.m:.12g}, nu = {complex(pt.nu):.6g}")
    print(f"  {rep.method}")
    if args.trace:
        _write_trace(args.trace, expr, region, args, pt.m)
    config = {"grid": grid.as_dict(), "psi": expr.label(), "region": region_to_spec(region), "branch": args.branch,
              "seed": _seed(args)}
    _write_json(args.out, run_report(args.argv, config, rep.as_dict(), time.perf_counter() - t0))
    return EXIT_OK if rep.admissible else EXIT_NEGATIVE


def _write_trace(path, expr, region, args, m):
    thetas = np.arange(args.theta_points) * (2 * np.pi / args.theta_points)
    cols = {
        "theta": thetas,
        "margin_principal": margin_trace(expr, region, thetas, m, PRINCIPAL),
        "margin_folded": margin_trace(expr, region, thetas, m, FOLDED),
    }
    bp = boundary_point(region, thetas)
    cols["boundary_re"], cols["boundary_im"] = bp.real, bp.imag
    if args.theorem and args.theorem in G_FORMS:
        params = {"beta": expr.beta, "n": expr.n, "alpha": expr.alpha}
        cols["g_margin"] = g_margin(args.theorem, thetas, m, params)
    with open(path, "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh)
        w.writerow(list(cols))
        for row in zip(*cols.values()):
            w.writerow([repr(float(v)) for v in row])


def cmd_roots(args) -> int:
    t0 = time.perf_counter()
    ids = list(EQUATIONS) if args.eq == "all" else [args.eq]
    results = []
    status = EXIT_OK
    for eq in ids:
        if eq not in EQUATIONS:
            raise UsageError(f"unknown equation {eq!r}; known: {', '.join(EQUATIONS)}")
        ns = [args.n] if EQUATIONS[eq].needs_n else [None]
        if EQUATIONS[eq].needs_n and args.n is None:
            if args.eq != "all":
                raise UsageError(f"equation {eq!r} needs --n")
            ns = [1, 2, 3]
        for n in ns:
            try:
                r = solve_root(eq, n=n, bracket=tuple(args.bracket) if args.bracket else None)
            except NoSignChange as exc:
                print(f"{eq}: {exc}", file=sys.stderr)
                return EXIT_NEGATIVE
            results.append(r.as_dict())
            tag = f"{eq}[n={n}]" if n is not None else eq
            print(f"{tag:10s} root = {r.root_hp}  |f| = {r.residual:.2e}  sign changes = {r.sign_changes}")
            if r.residual > RESIDUAL_TOL:
                status = EXIT_TOLERANCE
    _write_json(args.out, run_report(args.argv, {"seed": _seed(args)}, results, time.perf_counter() - t0))
    return status


def _corpus(args, seed):
    if not args.corpus:
        return standard_corpus(seed)
    try:
        specs = [parse_corpus(c) for c in args.corpus]
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    return make_corpus(specs, seed)


def _sampling(args) -> SamplingGrid:
    try:
        return SamplingGrid(tuple(args.radii), args.circle_points, args.sub_tol)
    except ValueError as exc:
        raise UsageError(str(exc)) from None


def cmd_check_implication(args) -> int:
    t0 = time.perf_counter()
    expr = _expr(args)
    _warn_unused(args, expr)
    hyp = _region(args.hypothesis)
    con = _region(args.conclusion)
    seed = _seed(args)
    corpus = _corpus(args, seed)
    grid = _sampling(args)
    res = implication_test(expr, hyp, con, corpus, grid)
    print(f"{expr.label()}: hypothesis {hyp} -> conclusion {con}")
    print(f"  corpus {corpus.label()} (seed {seed}): {res.hypothesis_holders} hypothesis holders, "
          f"{res.violations} violations, {res.conclusion_inconclusive} inconclusive")
    config = {"psi": expr.label(), "hypothesis": region_to_spec(hyp), "conclusion": region_to_spec(con),
              "corpus": corpus.label(), "seed": seed, "sampling": grid.as_dict()}
    _write_json(args.out, run_report(args.argv, config, res.as_dict(), time.perf_counter() - t0))
    if res.violations:
        print(json.dumps(_jsonable(res.details[0]), indent=2))
        return EXIT_NEGATIVE
    return EXIT_OK


def cmd_membership(args) -> int:
    t0 = time.perf_counter()
    try:
        f = load_coefficients(args.coeffs)
    except (OSError, CoefficientFormatError) as exc:
        print(f"malformed coefficient file: {exc}", file=sys.stderr)
        return EXIT_DATA
    if f.class_tag.kind != "normalized":
        print(f"{args.coeffs}: not normalized (need a_0 = 0, a_1 = 1)", file=sys.stderr)
        return EXIT_DATA
    grid = _sampling(args)
    v = starlike_e_membership(f, grid.radii, grid.theta_points, grid.tol)
    print(f"{args.coeffs}: {v.status} ({v.samples_checked} samples)")
    if v.witness is not None:
        w = v.witness
        print(f"  witness z = {w.z:.6g}, value = {w.value:.6g}, margin = {w.margin:.6g} ({w.reason})")
    _write_json(args.out, run_report(args.argv, {"sampling": grid.as_dict(), "seed": _seed(args)}, v.as_dict(), time.perf_counter() - t0))
    return {HOLDS: EXIT_OK, FAILS: EXIT_NEGATIVE}.get(v.status, EXIT_INCONCLUSIVE)


def cmd_report(args) -> int:
    t0 = time.perf_counter()
    grid = _grid(args)
    rows = constants_table()
    results = {
        "constants": [r.as_dict() for r in rows],
        "typo_flags": [f.as_dict() for f in typo_flags()],
        "examples": {},
        "theorems": [],
    }
    for pid, ex in EXAMPLES.items():
        results["examples"][pid] = min_exclusion(psi(pid), ex.region(), grid=grid).as_dict()
    seed = _seed(args)
    corpus = standard_corpus(seed) if args.implications else None
    for inst in instances():
        item = {
            "theorem": inst.label(),
            "beta": inst.beta,
            "principal": min_exclusion(inst.expr(), inst.region(), grid=grid).as_dict(),
            "folded": min_exclusion(inst.expr(), inst.region(), grid=grid, branch=FOLDED).as_dict(),
        }
        if corpus is not None:
            item["implication"] = implication_test(inst.expr(), inst.region(), parse_region("expdisk"), corpus).as_dict()
        results["theorems"].append(item)
        print(f"{inst.label():20s} principal {item['principal']['min_margin']:+.3e}  "
              f"folded {item['folded']['min_margin']:+.3e}")
    config = {"grid": grid.as_dict(), "seed": seed, "implications": args.implications}
    _write_json(args.out, run_report(args.argv, config, results, time.perf_counter() - t0))
    print(f"report written to {args.out}")
    ok = all(r.abs_diff <= CONSTANT_TOL for r in rows)
    return EXIT_OK if ok else EXIT_TOLERANCE


# --- parser -------------------------------------------------------------------


def _add_grid_flags(p):
    d = GridSpec()
    p.add_argument("--theta-points", type=int, default=d.theta_points)
    p.add_argument("--m-points", type=int, default=d.m_points)
    p.add_argument("--m-max", type=float, default=d.m_max)
    p.add_argument("--nu-window", type=float, default=d.nu_re_window)
    p.add_argument("--refine-tol", type=float, default=d.refine_tol)


def _add_sampling_flags(p):
    d = SamplingGrid()
    p.add_argument("--radii", type=float, nargs="+", default=list(d.radii))
    p.add_argument("--circle-points", type=int, default=d.theta_points)
    p.add_argument("--sub-tol", type=float, default=d.tol)


def _add_psi_flags(p, required=True):
    p.add_argument("--psi", required=required, help="catalog id, e.g. X3a")
    p.add_argument("--beta", type=float)
    p.add_argument("--n", type=int)
    p.add_argument("--alpha", type=float)


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--jobs", type=int, default=1, help="worker cap for grid evaluation")
    common.add_argument("--seed", type=lambda s: int(s, 0), default=None, help=f"overrides ${SEED_ENV}")
    common.add_argument("--out", help="write a JSON run report here")
    common.add_argument("-v", "--verbose", action="store_true")

    parser = _Parser(prog="subordlab", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("constants", parents=[common], help="recompute every printed constant")
    p.add_argument("--json", action="store_true")
    p.add_argument("--tol", type=float, default=CONSTANT_TOL)
    p.set_defaults(func=cmd_constants)

    p = sub.add_parser("admissible", parents=[common], help="minimise the exclusion margin")
    _add_psi_flags(p, required=False)
    p.add_argument("--theorem", help="theorem id; beta defaults to its bound")
    p.add_argument("--region", help="expdisk | lemniscate | disk:c=re,im,rho=r | moebius:a=..,b=..,c=..,d=..,k=..")
    p.add_argument("--branch", choices=[PRINCIPAL, FOLDED], default=PRINCIPAL)
    p.add_argument("--trace", help="CSV of margins and g along theta at the argmin m")
    _add_grid_flags(p)
    p.set_defaults(func=cmd_admissible)

    p = sub.add_parser("roots", parents=[common], help="solve a printed root equation")
    p.add_argument("--eq", required=True, help=f"one of {', '.join(EQUATIONS)} or 'all'")
    p.add_argument("--n", type=int)
    p.add_argument("--bracket", type=float, nargs=2)
    p.set_defaults(func=cmd_roots)

    p = sub.add_parser("check-implication", parents=[common], help="test an implication on a corpus")
    _add_psi_flags(p)
    p.add_argument("--hypothesis", required=True)
    p.add_argument("--conclusion", default="expdisk")
    p.add_argument("--corpus", action="append", help="schwarz:k=3,count=500 | series:envelope=0.5,count=500")
    _add_sampling_flags(p)
    p.set_defaults(func=cmd_check_implication)

    p = sub.add_parser("membership", parents=[common], help="sampled membership in the exp-starlike class")
    p.add_argument("--coeffs", required=True, help="JSON array of [re, im] pairs")
    _add_sampling_flags(p)
    p.set_defaults(func=cmd_membership)

    p = sub.add_parser("report", parents=[common], help="full run report as JSON")
    p.add_argument("--implications", action="store_true", help="also run the corpus implication tests")
    _add_grid_flags(p)
    p.set_defaults(func=cmd_report)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    argv = list(sys.argv[1:] if argv is None else argv)
    args = parser.parse_args(argv)
    args.argv = argv
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(levelname)s: %(message)s")
    if args.command == "report" and not args.out:
        parser.error("report needs --out PATH")
    if args.jobs < 1:
        parser.error("--jobs must be >= 1")
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"subordlab: error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
