"""``mixtree`` command line.

Exit status: 0 success, 1 a verification failed, 2 bad usage or bad input.
"""

from __future__ import annotations

import argparse
import csv
import os
import sys

from . import rational
from .brooms import (
    BroomParams,
    balanced_mixing_closed_form,
    build_double_broom,
)
from .enumeration import EXTREMAL_CSV_HEADER, extremal_table
from .errors import InvariantViolation, MixtreeInputError
from .mixing import mixing_time, pessimal_path
from .stopping import NaiveRule, simulate_naive_rule
from .surgery import evolve
from .tree import diameter, format_edge_list, read_edge_list

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2

BROOM_CSV_HEADER = ["n", "d", "ell", "r", "tmix_num", "tmix_den", "tmix_decimal",
                    "formula_match"]


def _workers() -> int:
    raw = os.environ.get("MIXTREE_THREADS", "1")
    try:
        return max(1, int(raw))
    except ValueError:
        return 1


def _report_text(tree, report) -> str:
    path = pessimal_path(tree, report)
    lines = [
        f"n = {tree.n}, diameter = {diameter(tree)}",
        f"t_mix = {rational.fmt(report.t_mix)}, z={report.z}, z'={report.z_partner}",
        f"pessimal path: {' '.join(map(str, path))}",
        "vertex  H(v,pi)  H(pi,v)",
    ]
    for v, (a, b) in enumerate(zip(report.mix_from, report.access_to)):
        lines.append(f"{v}  {rational.fmt(a)}  {rational.fmt(b)}")
    return "\n".join(lines) + "\n"


def cmd_analyze(args, out) -> int:
    tree = read_edge_list(args.path)
    report = mixing_time(tree)
    if args.format == "json":
        out.write(report.to_json())
    else:
        out.write(_report_text(tree, report))
    return EXIT_OK


def cmd_broom(args, out) -> int:
    if args.ell is None:
        params = BroomParams.balanced(args.n, args.d)
    else:
        params = BroomParams.from_split(args.n, args.d, args.ell)
    broom = build_double_broom(params)
    report = mixing_time(broom.tree)
    if args.format == "json":
        out.write(report.to_json())
        return EXIT_OK
    out.write(f"# double broom n={params.n} d={params.d} ell={params.ell} r={params.r}\n")
    out.write(f"# spine {' '.join(map(str, broom.spine))}\n")
    out.write(f"# t_mix = {rational.fmt(report.t_mix)}\n")
    out.write(format_edge_list(broom.tree))
    return EXIT_OK


def cmd_table(args, out) -> int:
    w = csv.writer(out, lineterminator="\n")
    w.writerow(BROOM_CSV_HEADER)
    for n in range(4, args.n_max + 1):
        for d in range(3, n):
            params = BroomParams.balanced(n, d)
            t = mixing_time(build_double_broom(params).tree).t_mix
            match = t == balanced_mixing_closed_form(n, d)
            w.writerow([n, d, params.ell, params.r, t.numerator, t.denominator,
                        rational.to_decimal_str(t), str(match).lower()])
    return EXIT_OK


def cmd_verify(args, out) -> int:
    rows = extremal_table(args.n_max, allow_long=args.long, d=args.d, workers=_workers())
    w = csv.writer(out, lineterminator="\n")
    w.writerow(EXTREMAL_CSV_HEADER)
    failed = []
    for rep in rows:
        w.writerow(rep.csv_row())
        if not rep.passed:
            failed.append(rep)
    for rep in failed:
        codes = ",".join(c.hex() for c in rep.argmax_codes)
        print(f"FAIL n={rep.n} d={rep.d}: argmax {codes}", file=sys.stderr)
    return EXIT_FAIL if failed else EXIT_OK


def cmd_evolve(args, out) -> int:
    tree = read_edge_list(args.path)
    cert = evolve(tree)
    text = cert.to_json() if args.format == "json" else cert.to_text()
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        out.write(text)
    return EXIT_OK


def cmd_simulate(args, out) -> int:
    tree = read_edge_list(args.path)
    rule = NaiveRule.to_stationary(tree, args.start)
    s = simulate_naive_rule(tree, rule, args.trials, args.seed)
    if args.format == "json":
        out.write(s.to_json())
        return EXIT_OK
    out.write(f"seed = {s.seed}, trials = {s.trials}, start = {s.start}\n")
    out.write(f"mean length = {s.mean_length:.6f} +- {s.std_error:.6f} (1 SE)\n")
    out.write(f"exact naive length = {rational.fmt(s.analytic_length)}\n")
    out.write(f"z = {s.z_score:.3f} ({'within' if s.within() else 'outside'} 3 SE)\n")
    out.write(f"TV(final, pi) = {s.tv_distance_to_target:.6f}\n")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="mixtree",
                                description="Exact mixing times of random walks on trees.")
    sub = p.add_subparsers(dest="command", required=True)

    a = sub.add_parser("analyze", help="mixing report for an edge-list file")
    a.add_argument("path")
    a.add_argument("--format", choices=["text", "json"], default="text")
    a.set_defaults(func=cmd_analyze)

    b = sub.add_parser("broom", help="build a double broom and report T_mix")
    b.add_argument("--n", type=int, required=True)
    b.add_argument("--d", type=int, required=True)
    b.add_argument("--ell", type=int, help="left leaf count (default: balanced)")
    b.add_argument("--format", choices=["text", "json"], default="text")
    b.set_defaults(func=cmd_broom)

    t = sub.add_parser("table", help="CSV of T_mix(D_{n,d}) for 4 <= n <= n-max")
    t.add_argument("--n-max", type=int, required=True)
    t.set_defaults(func=cmd_table)

    v = sub.add_parser("verify", help="exhaustively check the balanced broom is the unique maximiser")
    v.add_argument("--n-max", type=int, required=True)
    v.add_argument("--d", type=int)
    v.add_argument("--long", action="store_true", help="allow n = 11, 12")
    v.set_defaults(func=cmd_verify)

    e = sub.add_parser("evolve", help="surgery certificate from a tree to a balanced broom")
    e.add_argument("path")
    e.add_argument("--format", choices=["text", "json"], default="text")
    e.add_argument("--out")
    e.set_defaults(func=cmd_evolve)

    s = sub.add_parser("simulate", help="Monte Carlo run of the naive rule to pi")
    s.add_argument("path")
    s.add_argument("--start", type=int, required=True)
    s.add_argument("--trials", type=int, default=100_000)
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--format", choices=["text", "json"], default="text")
    s.set_defaults(func=cmd_simulate)
    return p


def main(argv=None, out=None) -> int:
    out = out or sys.stdout
    args = build_parser().parse_args(argv)
    try:
        return args.func(args, out)
    except (MixtreeInputError, OSError) as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except InvariantViolation as exc:
        print(f"invariant violated: {exc}", file=sys.stderr)
        return EXIT_FAIL


def main_exit() -> None:
    sys.exit(main())


if __name__ == "__main__":
    main_exit()
