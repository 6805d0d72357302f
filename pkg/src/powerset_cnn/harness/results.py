"""Writing and reading result tables."""
from __future__ import annotations

import csv
import io
import json
import math
from pathlib import Path

from .train import RunResult

CSV_HEADER = ("task", "model", "mean_acc", "std_acc", "repeats", "seed")


def format_accuracy(mean, std) -> str:
    """Percentages with one decimal, e.g. ``88.5 ± 4.3``; non-converged runs print as ``-``."""
    if math.isnan(mean):
        return "-"
    return f"{100 * mean:.1f} ± {100 * std:.1f}"


def results_csv(results) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(CSV_HEADER)
    for r in results:
        if math.isnan(r.mean):
            mean, std = "-", "-"
        else:
            mean, std = f"{100 * r.mean:.1f}", f"{100 * r.std:.1f}"
        w.writerow((r.task, r.model, mean, std, r.repeats, r.seed))
    return buf.getvalue()


def emit_results(results, path, fmt=None) -> Path:
    """Write one row per (task, model) as CSV, or full per-repeat data as JSON."""
    path = Path(path)
    fmt = (fmt or path.suffix.lstrip(".") or "csv").lower()
    results = list(results)
    if fmt == "csv":
        text = results_csv(results)
    elif fmt == "json":
        text = json.dumps([r.to_dict() for r in results], indent=1, allow_nan=True)
    else:
        raise ValueError(f"unknown result format {fmt!r}")
    path.write_text(text)
    return path


def load_results(path) -> list:
    return [RunResult.from_dict(d) for d in json.loads(Path(path).read_text())]
