#!/usr/bin/env python3
"""Summary table of final mistakes from experiment results CSVs.

Usage: table.py --csv A.csv B.csv ...

Prints rows = algorithm, columns = ensemble size, cells = mean ± sample
standard deviation of the final cumulative mistakes across input files
(`n/a` with a single replicate).  Exit codes: 0 success, 2 usage or
schema error.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

if __package__ in (None, ""):
    sys.path.insert(0, str(Path(__file__).resolve().parent))
    from common import SchemaError, read_results, summary_table
else:
    from .common import SchemaError, read_results, summary_table


def build_parser():
    parser = argparse.ArgumentParser(
        description="final-mistake summary table from results CSVs"
    )
    parser.add_argument("--csv", nargs="+", required=True, help="input results CSVs")
    return parser


def main(argv=None):
    args = build_parser().parse_args(argv)
    try:
        tables = [read_results(p) for p in args.csv]
    except (OSError, SchemaError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    sys.stdout.write(summary_table(tables))
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
