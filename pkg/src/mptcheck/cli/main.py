"""Command line entry point: ``mptcheck SPEC [options]``."""

from __future__ import annotations

import argparse
import sys

from .render import render
from .run import Options, run_checks
from .spec import SpecError, parse_spec

EXIT_OK, EXIT_FAILED, EXIT_USAGE = 0, 1, 2


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="mptcheck",
                                description="Check contracts, transition systems and "
                                            "temporal formulas described in a spec file.")
    p.add_argument("spec", help="spec file ('-' reads standard input)")
    p.add_argument("--json", action="store_true", help="machine-readable output")
    p.add_argument("--dump-automaton", metavar="ID",
                   help="print the automaton derived by check ID")
    p.add_argument("--max-states", type=int, default=100_000, metavar="N",
                   help="cap on the states of any constructed automaton (default 100000)")
    p.add_argument("--cross-check", action="store_true",
                   help="compare every formula automaton with the reference evaluator")
    p.add_argument("--check", metavar="ID", help="run only check ID")
    p.add_argument("--timing", action="store_true", help="report wall time per check")
    return p


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    if args.max_states < 1:
        print("mptcheck: --max-states must be positive", file=sys.stderr)
        return EXIT_USAGE
    try:
        if args.spec == "-":
            text = sys.stdin.read()
        else:
            with open(args.spec, encoding="utf-8") as fh:
                text = fh.read()
    except (OSError, UnicodeDecodeError) as e:
        print(f"mptcheck: cannot read {args.spec}: {e}", file=sys.stderr)
        return EXIT_USAGE
    try:
        spec = parse_spec(text)
    except SpecError as e:
        print(f"{args.spec}:{e}", file=sys.stderr)
        return EXIT_USAGE
    for flag, value in (("--check", args.check), ("--dump-automaton", args.dump_automaton)):
        if value is not None and spec.check(value) is None:
            print(f"mptcheck: {flag}: no check with id {value!r}", file=sys.stderr)
            return EXIT_USAGE
    options = Options(max_states=args.max_states, cross_check=args.cross_check,
                      only=args.check, dump=args.dump_automaton, timing=args.timing)
    results = run_checks(spec, options)
    sys.stdout.write(render(results, "json" if args.json else "text", spec.warnings))
    return EXIT_OK if all(r.ok for r in results) else EXIT_FAILED


if __name__ == "__main__":
    sys.exit(main())
