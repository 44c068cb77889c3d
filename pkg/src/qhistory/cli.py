"""Command line interface.

Exit codes: 0 success, 2 invalid input, 3 history cannot be evaluated,
4 representations disagree. Errors go to stderr as one JSON line.
"""

from __future__ import annotations

import argparse
import json
import sys

from . import demos
from .errors import QHistoryError
from .lang import outline, parse, render, to_tree
from .report import DEFAULT_PRECISION, render_report
from .scenario import load_scenario, run_scenario


def _common(defaults: bool) -> argparse.ArgumentParser:
    # Defined on the root parser and on every subcommand so flags may come
    # before or after the subcommand; subparser copies must not clobber.
    d = (lambda v: v) if defaults else (lambda v: argparse.SUPPRESS)
    p = argparse.ArgumentParser(add_help=False)
    p.add_argument("--json", action="store_true", default=d(False), help="machine-readable report")
    p.add_argument("--lenient", action="store_true", default=d(False),
                   help="warn instead of failing on non-orthogonal alternatives")
    p.add_argument("--precision", type=int, default=d(DEFAULT_PRECISION), help="displayed decimals")
    p.add_argument("--seed", type=int, default=d(0), help="seed for selfcheck")
    return p


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="qhistory",
        description="Evaluate quantum histories with projectors and with amplitudes.",
        parents=[_common(True)],
    )
    sub = parser.add_subparsers(dest="command", required=True)
    common = _common(False)

    p = sub.add_parser("parse", parents=[common], help="print canonical form and AST")
    p.add_argument("expr")

    p = sub.add_parser("eval", parents=[common], help="run the queries of a scenario file")
    p.add_argument("--scenario", required=True)

    p = sub.add_parser("demo", parents=[common], help="built-in demonstrations")
    demo_sub = p.add_subparsers(dest="demo", required=True)
    d = demo_sub.add_parser("polarizer", parents=[common])
    d.add_argument("--theta", type=float, required=True, help="radians")
    d.add_argument("--sweep", type=int, default=None, help="also sweep theta over [0, pi/2] in N steps")
    d = demo_sub.add_parser("double-slit", parents=[common])
    d.add_argument("--commuting", action="store_true")
    d = demo_sub.add_parser("die", parents=[common])
    d.add_argument("--faces", type=int, default=6)
    d.add_argument("--rotate", type=float, default=None, help="radians")

    p = sub.add_parser("selfcheck", parents=[common], help="randomized representation check")
    p.add_argument("--count", type=int, default=1000)
    return parser


def _emit_error(exc: QHistoryError) -> int:
    record = {"error": exc.kind, "type": type(exc).__name__, "message": str(exc), "exit_code": exc.exit_code}
    print(json.dumps(record, sort_keys=True), file=sys.stderr)
    return exc.exit_code


def _print_report(report, args):
    fmt = "machine" if args.json else "text"
    sys.stdout.write(render_report(report, fmt, args.precision))
    for n, rec in enumerate(report.records, 1):
        if rec.status != "ok":
            line = {"error": rec.status, "record": n, "kind": rec.kind, "exit_code": rec.exit_code}
            line.update(rec.error or {})
            print(json.dumps(line, sort_keys=True), file=sys.stderr)
    return report.exit_code


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    strict = not args.lenient
    try:
        if args.command == "parse":
            h = parse(args.expr)
            if args.json:
                print(json.dumps({"canonical": render(h), "ast": to_tree(h)}, sort_keys=True))
            else:
                print(render(h))
                print(outline(h))
            return 0
        if args.command == "eval":
            return _print_report(run_scenario(load_scenario(args.scenario), strict), args)
        if args.command == "demo":
            if args.demo == "polarizer":
                report = demos.polarizer(args.theta, args.sweep, strict)
            elif args.demo == "double-slit":
                report = demos.double_slit(args.commuting, strict)
            else:
                report = demos.die(args.faces, args.rotate)
            return _print_report(report, args)
        if args.command == "selfcheck":
            return _print_report(demos.selfcheck(args.seed, args.count), args)
    except QHistoryError as exc:
        return _emit_error(exc)
    parser.error(f"unknown command {args.command!r}")


def entry() -> None:
    sys.exit(main())


if __name__ == "__main__":
    entry()
