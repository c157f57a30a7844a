"""Command-line interface: fit, verify and compare subcommands.

Exit codes: 0 success, 2 malformed input, 3 violated solver precondition,
4 solver non-convergence.  Verify exits 1 when solver and oracle disagree.
"""

from __future__ import annotations

import argparse
import math
import sys

from .errors import (
    EmptyInput,
    InsufficientPoints,
    NoConvergence,
    ParseError,
    TooLarge,
    VerticalLineForAlgebraic,
)
from .geometry import PointSet
from .hull import build_hull
from .io import dumps_report, parse_points, report_to_dict, write_atomic
from .l1 import fit_algebraic_l1, fit_geometric_l1
from .l2 import fit_algebraic_l2, fit_geometric_l2, l2_coincidence
from .linf import fit_algebraic_linf, fit_geometric_linf
from .lp import LpSolverConfig, fit_algebraic_lp, fit_geometric_lp
from .oracle import exhaustive_pairs_oracle, grid_oracle
from .svg import render_svg

_EXIT_PARSE = 2
_EXIT_PRECONDITION = 3
_EXIT_NO_CONVERGENCE = 4


def _load_points(path: str, format: str) -> PointSet:
    if format == "auto":
        format = "json" if path.endswith(".json") else "csv"
    with open(path) as fh:
        return parse_points(fh, format=format)


def _run_solver(ps: PointSet, norm: str, distance: str, tol, p, angle_samples, seed):
    vertical = distance == "vertical"
    if norm == "l2":
        l2rep = fit_algebraic_l2(ps) if vertical else fit_geometric_l2(ps)
        return l2rep.report, l2rep.eigen
    if norm == "l1":
        fit = fit_algebraic_l1 if vertical else fit_geometric_l1
        return fit(ps, tol=tol), None
    if norm == "linf":
        fit = fit_algebraic_linf if vertical else fit_geometric_linf
        return fit(ps, tol=tol), None
    if norm == "lp":
        if p is None:
            raise ParseError("--norm lp requires --p")
        cfg = LpSolverConfig(p=p, angle_samples=angle_samples, seed=seed)
        fit = fit_algebraic_lp if vertical else fit_geometric_lp
        return fit(ps, cfg), None
    raise ParseError(f"unknown norm {norm!r}")


def _emit(text: str, out_path):
    if out_path:
        write_atomic(out_path, text + "\n")
    else:
        print(text)


def cmd_fit(args) -> int:
    ps = _load_points(args.infile, args.format)
    report, eigen = _run_solver(
        ps, args.norm, args.distance, args.tol, args.p, args.angle_samples, args.seed
    )
    d = report_to_dict(report, include_candidates=args.all_optima)
    if eigen is not None:
        d["eigen"] = {"lambda_min": eigen.lambda_min, "lambda_max": eigen.lambda_max, "d": eigen.d}
    _emit(dumps_report(d), args.out)
    if args.svg:
        hull = build_hull(ps) if args.norm == "linf" else None
        write_atomic(args.svg, render_svg(ps, [report], hull=hull))
    return 0


def cmd_verify(args) -> int:
    ps = _load_points(args.infile, args.format)
    report, _ = _run_solver(
        ps, args.norm, args.distance, args.tol, args.p, args.angle_samples, args.seed
    )
    solver_obj = report.objective
    if args.norm in ("l1", "linf") and ps.m_eff <= 12:
        norm_value = 1.0 if args.norm == "l1" else math.inf
        oracle = exhaustive_pairs_oracle(ps, norm_value, args.distance)
        oracle_obj = oracle.value
        agree = abs(solver_obj - oracle_obj) <= 1e-12 * (1.0 + abs(solver_obj))
    else:
        norm_value = {"l1": 1.0, "l2": 2.0, "linf": math.inf}.get(args.norm, args.p)
        res = grid_oracle(ps, norm_value, args.distance)
        oracle_obj = res.value
        slack = 1e-9 * (1.0 + abs(solver_obj))
        agree = solver_obj <= oracle_obj + slack and oracle_obj <= solver_obj + res.err_bound + slack
    verdict = "agree" if agree else "disagree"
    print(f"solver={solver_obj!r} oracle={oracle_obj!r} {verdict}")
    return 0 if agree else 1


def cmd_compare(args) -> int:
    ps = _load_points(args.infile, args.format)
    out = {"reports": {}}
    for norm in ("l1", "l2", "linf", "lp"):
        for distance in ("vertical", "orthogonal"):
            report, _ = _run_solver(
                ps, norm, distance, args.tol, args.p, args.angle_samples, args.seed
            )
            out["reports"][f"{norm}_{distance}"] = report_to_dict(report)
    coin = l2_coincidence(ps)
    out["l2_coincidence"] = {"coincide": coin.coincide, "branch": coin.branch}
    _emit(dumps_report(out), args.out)
    return 0


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="lpline",
        description="Fit optimal lines to planar point sets under L1/L2/Linf/Lp norms.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add_common(p, with_norm=True):
        if with_norm:
            p.add_argument("--norm", required=True, choices=["l1", "l2", "linf", "lp"])
            p.add_argument("--distance", required=True, choices=["vertical", "orthogonal"])
        p.add_argument("--p", type=float, default=None,
                       help="exponent for --norm lp (compare defaults to 1.5)")
        p.add_argument("--tol", type=float, default=None,
                       help="classification tolerance; default 1e-9*(1+max coordinate magnitude)")
        p.add_argument("--in", dest="infile", required=True, help="input point file")
        p.add_argument("--format", choices=["auto", "csv", "json"], default="auto")
        p.add_argument("--angle-samples", type=int, default=720,
                       help="angle scan resolution for the orthogonal Lp solver")
        p.add_argument("--seed", type=int, default=0, help="multi-start seed for the Lp solver")

    fit = sub.add_parser("fit", help="run one solver and emit a JSON report")
    add_common(fit)
    fit.add_argument("--all-optima", action="store_true",
                     help="include the full candidate table in the report")
    fit.add_argument("--out", default=None, help="write the JSON report here instead of stdout")
    fit.add_argument("--svg", default=None, help="also write an SVG plot")

    verify = sub.add_parser("verify", help="run a solver and the matching brute-force oracle")
    add_common(verify)

    compare = sub.add_parser("compare", help="run every solver plus the least-squares coincidence test")
    add_common(compare, with_norm=False)
    compare.add_argument("--out", default=None)
    compare.set_defaults(norm=None, distance=None)

    fit.set_defaults(func=cmd_fit)
    verify.set_defaults(func=cmd_verify)
    compare.set_defaults(func=cmd_compare)
    return parser


def main(argv=None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    if getattr(args, "command", None) == "compare" and args.p is None:
        args.p = 1.5
    try:
        return args.func(args)
    except (ParseError, EmptyInput, FileNotFoundError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return _EXIT_PARSE
    except (InsufficientPoints, VerticalLineForAlgebraic, TooLarge, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return _EXIT_PRECONDITION
    except NoConvergence as exc:
        print(f"error: no convergence: {exc}", file=sys.stderr)
        return _EXIT_NO_CONVERGENCE


if __name__ == "__main__":
    sys.exit(main())
