#!/usr/bin/env python3
"""Cumulative-error curves from experiment results CSVs.

Usage: plot.py --csv A.csv B.csv --out fig1.svg [--algos ...]
[--ensembles ...] [--title ...]

Draws one line per (algorithm, ensemble size): x = trial, y = mean
cumulative mistakes across the input files.  Exit codes: 0 success,
2 usage or schema error.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

if __package__ in (None, ""):
    sys.path.insert(0, str(Path(__file__).resolve().parent))
    from common import DISPLAY, SchemaError, mean_curves, read_results
else:
    from .common import DISPLAY, SchemaError, mean_curves, read_results


def build_parser():
    parser = argparse.ArgumentParser(
        description="mean cumulative-mistake curves from results CSVs"
    )
    parser.add_argument("--csv", nargs="+", required=True, help="input results CSVs")
    parser.add_argument("--out", required=True, help="output image (.svg or .png)")
    parser.add_argument("--algos", nargs="*", help="restrict to these algorithm ids")
    parser.add_argument(
        "--ensembles", nargs="*", type=int, help="restrict to these ensemble sizes"
    )
    parser.add_argument("--title", default="Mean cumulative mistakes")
    return parser


def render(curves, out, title):
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    fig, ax = plt.subplots(figsize=(7, 4.5))
    for (algo, r), (trials, means) in curves.items():
        ax.plot(trials, means, label=f"{DISPLAY.get(algo, algo)} (r={r})")
    ax.set_xlabel("trial")
    ax.set_ylabel("mean cumulative mistakes")
    ax.set_title(title)
    ax.legend()
    fig.tight_layout()
    fig.savefig(out)
    plt.close(fig)


def main(argv=None):
    args = build_parser().parse_args(argv)
    suffix = Path(args.out).suffix.lower()
    if suffix not in (".svg", ".png"):
        print(f"error: output extension must be .svg or .png, got {suffix!r}",
              file=sys.stderr)
        return 2
    try:
        tables = [read_results(p) for p in args.csv]
    except (OSError, SchemaError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    curves = mean_curves(
        tables,
        algos=set(args.algos) if args.algos else None,
        ensembles=set(args.ensembles) if args.ensembles else None,
    )
    if not curves:
        print("error: no matching (algo, ensemble) series", file=sys.stderr)
        return 2
    render(curves, args.out, args.title)
    print(f"wrote {args.out} ({len(curves)} series)")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
