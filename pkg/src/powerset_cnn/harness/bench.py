"""Timing of the fast transforms over a range of ground set sizes."""
from __future__ import annotations

import time

import numpy as np

from ..core import ShiftModel
from ..transforms import TransformKind, base_matrix, kron_apply_inplace

RATIO_BAND = (1.8, 2.6)


def time_transform(n, model, repeats=7, rng=None, min_time=0.2) -> float:
    """Best wall time in seconds of one in-place forward transform.

    At least ``repeats`` runs, and more until ``min_time`` seconds have been
    timed. The minimum is used because scheduler and cache noise only ever
    add time.
    """
    rng = np.random.default_rng(0) if rng is None else rng
    base = base_matrix(TransformKind.SIGNAL_FORWARD, model)
    buf = rng.standard_normal(1 << n)
    work = buf.copy()
    kron_apply_inplace(work, base, n)  # compile and warm caches
    best, total, runs = float("inf"), 0.0, 0
    while runs < repeats or total < min_time:
        np.copyto(work, buf)
        t = time.perf_counter()
        kron_apply_inplace(work, base, n)
        dt = time.perf_counter() - t
        best, total, runs = min(best, dt), total + dt, runs + 1
    return best


def bench_transforms(n_range=range(10, 21), models=tuple(ShiftModel), repeats=7,
                     rounds=7) -> list:
    """One row per (n, model) with the best time and the ratio to the previous n.

    All sizes are timed once per round and the best over ``rounds`` is kept,
    so a slow spell on the machine does not land on a single n.
    """
    sizes = list(n_range)
    rows = []
    for model in models:
        model = ShiftModel.parse(model)
        best = {n: float("inf") for n in sizes}
        for _ in range(rounds):
            for n in sizes:
                best[n] = min(best[n], time_transform(n, model, repeats, min_time=0.04))
        prev = None
        for n in sizes:
            t = best[n]
            rows.append({"n": n, "model": model.name, "seconds": t,
                         "ns_per_transform": 1e9 * t,
                         "ratio": t / prev if prev else float("nan")})
            prev = t
    return rows


def doubling_ok(rows, n_min=14, n_max=19, band=RATIO_BAND) -> bool:
    """Whether time(n+1)/time(n) stays inside ``band`` for n_min <= n < n_max + 1."""
    lo, hi = band
    checked = [r for r in rows if n_min < r["n"] <= n_max + 1 and r["ratio"] == r["ratio"]]
    return bool(checked) and all(lo <= r["ratio"] <= hi for r in checked)


def format_table(rows) -> str:
    lines = [f"{'n':>3} {'model':<8} {'ns/transform':>14} {'ratio':>6}"]
    for r in rows:
        ratio = "" if r["ratio"] != r["ratio"] else f"{r['ratio']:.2f}"
        lines.append(f"{r['n']:>3} {r['model']:<8} {r['ns_per_transform']:>14.0f} {ratio:>6}")
    return "\n".join(lines)
