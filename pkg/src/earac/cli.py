"""Command-line surface.

Subcommands: table, build, eval, simulate, bounds, demo-session.
Exit codes: 0 success, 2 usage error, 3 data/file error, 4 internal
invariant violation.  EARAC_SEED sets the default seed; the --seed flag
takes precedence.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from dataclasses import dataclass
from fractions import Fraction

from . import montecarlo, optimizer, session
from .codetree import (build_paper_tree, format_tree, leaf_indices,
                       min_probability, path_profile, read_tree, sr_average,
                       write_tree, exact_bit_probability, TreeFormatError)
from .exactnum import ExactValue, ParseError

# Published constants for the quantum-code column of the comparison table
# (reported to five decimals; not re-derived here).
QRAC_CONSTANTS = {
    4: 0.74148, 5: 0.71358, 6: 0.69405, 7: 0.67864, 8: 0.66663,
    9: 0.65689, 10: 0.64820, 11: 0.64105, 12: 0.63487, 15: 0.62036,
}

# Values printed in the source table for the rows our evaluation contradicts:
# the 8-bit entry exceeds the (1 + 1/sqrt(8))/2 ceiling and the 11-bit entry
# matches no tree average we can construct.
_PRINTED_ERRATA = {
    8: ExactValue(Fraction(52, 80), c6=Fraction(1, 80)),
    11: ExactValue(Fraction(1, 2), c2=Fraction(3, 120), c3=Fraction(8, 120)),
}


@dataclass
class TableRow:
    n: int
    qrac_p: float | None
    earac_exact: ExactValue
    earac_decimal: float
    delta_advantage: float | None
    provenance: str  # "paper-match" | "erratum-flagged" | "-"
    printed_exact: ExactValue | None = None


def table_rows(max_n: int) -> list[TableRow]:
    if max_n < 2:
        raise ValueError("max_n must be >= 2")
    rows = []
    for n in range(2, max_n + 1):
        earac = sr_average(build_paper_tree(n))
        dec = earac.to_decimal()
        if n in (2, 3):
            qrac = dec  # identical primitives
        else:
            qrac = QRAC_CONSTANTS.get(n)
        delta_adv = None if qrac is None else dec - qrac
        if n in _PRINTED_ERRATA:
            flag = "erratum-flagged"
        elif n in QRAC_CONSTANTS or n in (2, 3):
            flag = "paper-match"
        else:
            flag = "-"
        rows.append(TableRow(n, qrac, earac, dec, delta_adv, flag,
                             _PRINTED_ERRATA.get(n)))
    return rows


def _render_table_human(rows: list[TableRow]) -> str:
    lines = [f"{'n':>3} {'qrac':>9} {'earac':>11} {'exact':<28} {'delta':>9} flag"]
    for r in rows:
        qrac = f"{r.qrac_p:.5f}" if r.qrac_p is not None else "-"
        delta = f"{r.delta_advantage:.5f}" if r.delta_advantage is not None else "-"
        lines.append(f"{r.n:>3} {qrac:>9} {r.earac_decimal:>11.8f} "
                     f"{r.earac_exact.render():<28} {delta:>9} {r.provenance}")
        if r.printed_exact is not None:
            lines.append(f"    note: published value {r.printed_exact.render()} "
                         f"({r.printed_exact.to_decimal():.6f}) replaced by derived value")
    return "\n".join(lines)


def _render_table_csv(rows: list[TableRow]) -> str:
    lines = ["n,qrac,earac_decimal,earac_exact,delta,flag,printed_exact"]
    for r in rows:
        qrac = f"{r.qrac_p:.5f}" if r.qrac_p is not None else ""
        delta = f"{r.delta_advantage:.5f}" if r.delta_advantage is not None else ""
        printed = r.printed_exact.render() if r.printed_exact is not None else ""
        lines.append(f"{r.n},{qrac},{r.earac_decimal:.8f},"
                     f"{r.earac_exact.render()},{delta},{r.provenance},{printed}")
    return "\n".join(lines)


def _render_table_json(rows: list[TableRow]) -> str:
    out = []
    for r in rows:
        out.append({
            "n": r.n,
            "qrac": r.qrac_p,
            "earac_decimal": r.earac_decimal,
            "earac_exact": r.earac_exact.render(),
            "delta": r.delta_advantage,
            "flag": r.provenance,
            "printed_exact": r.printed_exact.render() if r.printed_exact else None,
        })
    return json.dumps(out, indent=2)


def cmd_table(args) -> int:
    rows = table_rows(args.max_n)
    render = {"human": _render_table_human, "csv": _render_table_csv,
              "json": _render_table_json}[args.format]
    print(render(rows))
    return 0


def cmd_build(args) -> int:
    if args.strategy == "paper":
        tree = build_paper_tree(args.n)
        raw_flag = False
    elif args.strategy == "opt-avg":
        entry = optimizer.best_avg_tree(args.n)
        tree, raw_flag = entry.tree, optimizer.has_raw_bit_feed(entry.tree)
    else:
        entry = optimizer.best_min_tree(args.n)
        tree, raw_flag = entry.tree, optimizer.has_raw_bit_feed(entry.tree)
    text = format_tree(tree)
    if args.out:
        write_tree(tree, args.out)
    print(text)
    if raw_flag:
        print("note: tree feeds a raw input bit directly into a primitive")
    return 0


def cmd_eval(args) -> int:
    tree = read_tree(args.tree)
    for leaf in sorted(leaf_indices(tree)):
        p = exact_bit_probability(path_profile(tree, leaf))
        print(f"bit {leaf}: {p.render()} = {p.to_decimal():.10f}")
    pmin = min_probability(tree)
    print(f"min: {pmin.render()} = {pmin.to_decimal():.10f}")
    if args.sr:
        psr = sr_average(tree)
        print(f"sr-average: {psr.render()} = {psr.to_decimal():.10f}")
    return 0


def cmd_simulate(args) -> int:
    tree = read_tree(args.tree)
    targets = "all" if args.target is None else args.target
    report = montecarlo.estimate(tree, args.trials, args.seed, targets,
                                 engine=args.engine)
    print(report.to_json() if args.format == "json" else report.to_text())
    return 0


def cmd_bounds(args) -> int:
    n = args.n
    ub = optimizer.upper_bound(n)
    lb = optimizer.lower_bound(n)
    n_geq = optimizer.smallest_23_smooth_geq(n)
    if ub.is_exact:
        print(f"upper: {ub.exact.render()} = {ub.decimal}")
    else:
        print(f"upper: {ub.decimal} (inexact: 1/sqrt({n}) outside the ring)")
    print(f"lower: {lb.render()} = {lb.to_decimal():.10f} (via size {n_geq})")
    achieved = optimizer.best_avg_tree(n).probability.to_decimal()
    lhs, holds = optimizer.ic_check(n, achieved)
    print(f"ic-check at achieved p={achieved:.10f}: "
          f"lhs={lhs:.6f} {'holds' if holds else 'VIOLATED'}")
    return 0


def cmd_demo_session(args) -> int:
    tree = build_paper_tree(args.n)
    bits = tuple(int(c) for c in args.bits)
    if len(bits) != args.n or any(b not in (0, 1) for b in bits):
        raise ValueError(f"--bits must be {args.n} binary digits")
    result = session.run_session(tree, bits, args.target,
                                 transport=args.transport, seed=args.seed)
    print(f"guess: {result.guess} (true bit: {bits[args.target]})")
    print(f"classical bits sent: {result.classical_bits_sent()}")
    for name, log in (("alice", result.alice_log), ("bob", result.bob_log),
                      ("broker", result.broker_log)):
        for direction, line in log.entries:
            print(f"{name} {direction} {line}")
    if args.dump:
        session.dump_transcript(result, args.dump)
    return 0


def _default_seed() -> int:
    return int(os.environ.get("EARAC_SEED", "0"))


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="earac")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("table", help="reproduce the code-comparison table")
    p.add_argument("--max-n", type=int, default=15)
    p.add_argument("--format", choices=("human", "csv", "json"), default="human")
    p.set_defaults(func=cmd_table)

    p = sub.add_parser("build", help="construct a concatenation tree")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--strategy", choices=("paper", "opt-avg", "opt-min"),
                   default="paper")
    p.add_argument("--out", default=None)
    p.set_defaults(func=cmd_build)

    p = sub.add_parser("eval", help="exact per-bit success probabilities")
    p.add_argument("--tree", required=True)
    p.add_argument("--sr", action="store_true")
    p.set_defaults(func=cmd_eval)

    p = sub.add_parser("simulate", help="Monte Carlo check of a tree")
    p.add_argument("--tree", required=True)
    p.add_argument("--trials", type=int, default=100_000)
    p.add_argument("--seed", type=int, default=_default_seed())
    p.add_argument("--target", type=int, default=None)
    p.add_argument("--engine", choices=("vectorized", "reference"),
                   default="vectorized")
    p.add_argument("--format", choices=("human", "json"), default="human")
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("bounds", help="upper/lower bounds and the IC check")
    p.add_argument("--n", type=int, required=True)
    p.set_defaults(func=cmd_bounds)

    p = sub.add_parser("demo-session", help="two-party protocol demo")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--bits", required=True)
    p.add_argument("--target", type=int, required=True)
    p.add_argument("--transport", choices=("inproc", "tcp"), default="inproc")
    p.add_argument("--seed", type=int, default=_default_seed())
    p.add_argument("--dump", default=None)
    p.set_defaults(func=cmd_demo_session)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (TreeFormatError, ParseError, OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3
    except (session.ProtocolError, AssertionError) as exc:
        print(f"internal error: {exc}", file=sys.stderr)
        return 4


if __name__ == "__main__":
    sys.exit(main())
