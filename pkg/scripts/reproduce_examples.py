#!/usr/bin/env python3
"""Reproduce every built-in example computation and print its report.

Usage:
    python scripts/reproduce_examples.py [--json] [name ...]

Without names, runs all of: heisenberg-obstruction, iterated-integrals,
legendre, incomplete-gamma, replace-bi, per-derivation-triviality.
Exit code 0 iff every expectation held.
"""

import argparse
import sys
import time

from isocert.cli.examples import EXAMPLE_NAMES, ExampleFailure, run_example
from isocert.cli.reports import emit_report


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("names", nargs="*",
                        help=f"examples to run (default: all of {', '.join(EXAMPLE_NAMES)})")
    parser.add_argument("--json", action="store_true")
    args = parser.parse_args()
    for name in args.names:
        if name not in EXAMPLE_NAMES:
            parser.error(f"unknown example {name!r}")
    names = args.names or list(EXAMPLE_NAMES)
    failures = 0
    for name in names:
        start = time.perf_counter()
        try:
            report = run_example(name)
        except ExampleFailure as exc:
            failures += 1
            print(f"[FAIL] {name}: {exc}")
            continue
        elapsed = time.perf_counter() - start
        print(emit_report(report, "json" if args.json else "human"))
        print(f"[ok] {name} ({elapsed:.2f}s)")
        print()
    return 1 if failures else 0


if __name__ == "__main__":
    sys.exit(main())
