"""Shared CSV handling for the plotting and table scripts.

Input files follow the experiment harness schema
``trial,algo,ensemble,cum_mistakes,usec``; anything else is rejected with
an error naming the offending column.  Nothing here mutates its inputs.
"""

from __future__ import annotations

import math
from pathlib import Path

COLUMNS = ("trial", "algo", "ensemble", "cum_mistakes", "usec")
INT_COLUMNS = {"trial", "ensemble", "cum_mistakes", "usec"}

# display names keyed by the harness algorithm ids, in display order
DISPLAY = {"sgp": "SGP", "scs-f": "SCS-F", "scs-b": "SCS-B", "qbay": "Q-BAY"}


class SchemaError(ValueError):
    """Input CSV does not match the harness results schema."""


def read_results(path):
    """Parse one results CSV into a list of row dicts."""
    lines = Path(path).read_text().splitlines()
    if not lines:
        raise SchemaError(f"{path}: empty file")
    header = tuple(h.strip() for h in lines[0].split(","))
    for col in COLUMNS:
        if col not in header:
            raise SchemaError(f"{path}: missing column '{col}'")
    for col in header:
        if col not in COLUMNS:
            raise SchemaError(f"{path}: unexpected column '{col}'")
    rows = []
    for lineno, line in enumerate(lines[1:], start=2):
        if not line.strip():
            continue
        parts = line.split(",")
        if len(parts) != len(header):
            raise SchemaError(
                f"{path}: line {lineno}: expected {len(header)} fields"
            )
        row = dict(zip(header, (p.strip() for p in parts)))
        for col in INT_COLUMNS:
            try:
                row[col] = int(row[col])
            except ValueError:
                raise SchemaError(
                    f"{path}: line {lineno}: non-integer value in column '{col}'"
                )
        rows.append(row)
    if not rows:
        raise SchemaError(f"{path}: no data rows")
    return rows


def series_keys(tables):
    """All (algo, ensemble) pairs present in any file, display-ordered."""
    keys = {(r["algo"], r["ensemble"]) for rows in tables for r in rows}
    order = {a: i for i, a in enumerate(DISPLAY)}
    return sorted(keys, key=lambda k: (order.get(k[0], len(order)), k[1]))


def mean_curves(tables, algos=None, ensembles=None):
    """Pointwise mean of cumulative mistakes across files, per series.

    Returns {(algo, ensemble): (trials, means)} with trials ascending;
    each series averages over the files that contain it.
    """
    out = {}
    for algo, r in series_keys(tables):
        if algos is not None and algo not in algos:
            continue
        if ensembles is not None and r not in ensembles:
            continue
        per_trial = {}
        for rows in tables:
            for row in rows:
                if row["algo"] == algo and row["ensemble"] == r:
                    per_trial.setdefault(row["trial"], []).append(
                        row["cum_mistakes"]
                    )
        trials = sorted(per_trial)
        means = [sum(per_trial[t]) / len(per_trial[t]) for t in trials]
        out[(algo, r)] = (trials, means)
    return out


def final_mistakes(tables):
    """Final cumulative mistakes per (algo, ensemble), one value per file
    containing the series."""
    out = {}
    for key in series_keys(tables):
        algo, r = key
        finals = []
        for rows in tables:
            best_trial, final = -1, None
            for row in rows:
                if (
                    row["algo"] == algo
                    and row["ensemble"] == r
                    and row["trial"] > best_trial
                ):
                    best_trial, final = row["trial"], row["cum_mistakes"]
            if final is not None:
                finals.append(final)
        out[key] = finals
    return out


def mean_std_cell(values):
    """`mean ± std` with the sample (n-1) standard deviation; a single
    replicate reports `n/a` for the spread."""
    mean = sum(values) / len(values)
    if len(values) < 2:
        return f"{mean:g} ± n/a"
    var = sum((v - mean) ** 2 for v in values) / (len(values) - 1)
    return f"{mean:g} ± {math.sqrt(var):.2f}"


def summary_table(tables):
    """Plain-text summary: rows = algorithm, columns = ensemble size,
    cells = mean ± sample std of final cumulative mistakes."""
    finals = final_mistakes(tables)
    algos = []
    for algo, _ in finals:
        if algo not in algos:
            algos.append(algo)
    rs = sorted({r for _, r in finals})
    header = ["algo"] + [f"r={r}" for r in rs]
    body = []
    for algo in algos:
        cells = [DISPLAY.get(algo, algo)]
        for r in rs:
            values = finals.get((algo, r), [])
            cells.append(mean_std_cell(values) if values else "-")
        body.append(cells)
    widths = [
        max(len(row[i]) for row in [header] + body) for i in range(len(header))
    ]
    lines = [
        "  ".join(cell.ljust(w) for cell, w in zip(row, widths)).rstrip()
        for row in [header] + body
    ]
    return "\n".join(lines) + "\n"
