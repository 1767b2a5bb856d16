"""Benchmark harness comparing the fill algorithms at desk scale.

Times the generalized flood against the improved variant (heap backend), the
improved variant on heap vs bucket queues (integerized terrain), and the
improved variant against the naive fixpoint fill, across sizes and depression
fractions. Results are BenchRecords, exportable as CSV with the stable header
``algorithm,raster_id,cells,pct_depression,backend,wall_s``.
"""

from __future__ import annotations

import csv
import time
from dataclasses import dataclass
from statistics import median
from typing import Callable, Iterable, Optional

import numpy as np

from .fill import improved_priority_flood, priority_flood
from .raster import Connectivity, Raster
from .reference import planchon_darboux_fill, synth_dem

__all__ = [
    "BenchRecord",
    "bench_suite",
    "write_csv",
    "dem_with_depression_fraction",
    "depression_fraction",
    "time_op",
]

CSV_HEADER = ("algorithm", "raster_id", "cells", "pct_depression", "backend", "wall_s")


@dataclass(frozen=True)
class BenchRecord:
    algorithm: str
    raster_id: str
    cells: int
    pct_depression: float
    backend: str
    wall_s: float


def depression_fraction(dem: Raster) -> float:
    """Percent of data cells raised by the fill."""
    _, report = improved_priority_flood(dem)
    data = dem.data_cell_count()
    return 100.0 * report.cells_raised / data if data else 0.0


def dem_with_depression_fraction(
    target_pct: float,
    nrows: int,
    ncols: int,
    seed: int,
    tol_pct: float = 3.0,
) -> tuple[Raster, float]:
    """Pit-studded terrain whose measured depression fraction lands within
    ``tol_pct`` points of ``target_pct`` (bisection on the pit count)."""
    if target_pct <= 0.5:
        dem = synth_dem("slope", nrows, ncols, seed)
        return dem, 0.0
    lo, hi = 0, 8
    # grow the bracket until we overshoot the target
    while True:
        dem = synth_dem("pits", nrows, ncols, seed, n_pits=hi)
        pct = depression_fraction(dem)
        if pct >= target_pct or hi > nrows * ncols:
            break
        lo, hi = hi, hi * 4
    best = (dem, pct)
    while hi - lo > 1:
        mid = (lo + hi) // 2
        dem = synth_dem("pits", nrows, ncols, seed, n_pits=mid)
        pct = depression_fraction(dem)
        if abs(pct - target_pct) < abs(best[1] - target_pct):
            best = (dem, pct)
        if abs(pct - target_pct) <= tol_pct:
            return dem, pct
        if pct < target_pct:
            lo = mid
        else:
            hi = mid
    return best


def time_op(op: Callable[[], object], repeats: int, stat: str = "median") -> float:
    """Wall time of ``op`` over ``repeats`` runs, after one discarded warm-up.

    ``stat`` picks the reported statistic: ``median`` for representative
    throughput, ``min`` for scaling checks (scheduler noise only ever adds
    time, so the minimum tracks the algorithmic cost).
    """
    op()
    times = []
    for _ in range(repeats):
        t0 = time.perf_counter()
        op()
        times.append(time.perf_counter() - t0)
    return min(times) if stat == "min" else median(times)


def bench_suite(
    sizes: Iterable[int],
    depression_fractions: Iterable[float],
    repeats: int = 3,
    seed: int = 90125,
    include_baseline: bool = True,
    progress: Optional[Callable[[str], None]] = None,
) -> list[BenchRecord]:
    """Time the algorithm matrix over synthetic terrain.

    ``sizes`` are square side lengths (>= 64); ``depression_fractions`` are
    target percentages. ``repeats`` (>= 3) runs are taken per measurement and
    the median reported; a warm-up run is discarded. The naive baseline is
    skipped when ``include_baseline`` is off (it dominates total runtime).
    """
    sizes = list(sizes)
    fractions = list(depression_fractions)
    if any(s < 64 for s in sizes):
        raise ValueError(f"sizes must be >= 64, got {sizes}")
    if repeats < 3:
        raise ValueError(f"repeats must be >= 3, got {repeats}")

    def note(msg: str) -> None:
        if progress is not None:
            progress(msg)

    records = []
    for side in sizes:
        for target in fractions:
            dem, pct = dem_with_depression_fraction(target, side, side, seed)
            rid = f"pits{side}x{side}@{pct:.1f}pct"
            cells = dem.size

            runs = [
                ("priority_flood", "heap",
                 lambda d=dem: priority_flood(d, Connectivity.EIGHT, "heap")),
                ("improved_priority_flood", "heap",
                 lambda d=dem: improved_priority_flood(d, Connectivity.EIGHT, "heap")),
            ]
            intdem = dem.with_values(np.floor(dem.values))
            for name, backend, op in runs:
                wall = time_op(op, repeats)
                records.append(BenchRecord(name, rid, cells, pct, backend, wall))
                note(f"{name:<26} {rid:<24} {backend:<6} {wall:.4f}s")

            int_rid = rid + "-int"
            for backend in ("heap", "bucket"):
                wall = time_op(
                    lambda d=intdem, b=backend: improved_priority_flood(d, Connectivity.EIGHT, b),
                    repeats,
                )
                records.append(
                    BenchRecord("improved_priority_flood", int_rid, cells, pct, backend, wall)
                )
                note(f"{'improved_priority_flood':<26} {int_rid:<24} {backend:<6} {wall:.4f}s")

            if include_baseline:
                wall = time_op(lambda d=dem: planchon_darboux_fill(d), repeats)
                records.append(
                    BenchRecord("planchon_darboux_fill", rid, cells, pct, "sweeps", wall)
                )
                note(f"{'planchon_darboux_fill':<26} {rid:<24} {'sweeps':<6} {wall:.4f}s")
    return records


def speedup_series(records: list[BenchRecord]) -> list[tuple[float, float]]:
    """(pct_depression, % speed-up of improved vs generalized) per raster."""
    base = {}
    improved = {}
    for rec in records:
        if rec.backend != "heap":
            continue
        if rec.algorithm == "priority_flood":
            base[rec.raster_id] = rec
        elif rec.algorithm == "improved_priority_flood":
            improved[rec.raster_id] = rec
    out = []
    for rid, b in base.items():
        if rid in improved:
            i = improved[rid]
            out.append((b.pct_depression, 100.0 * (b.wall_s - i.wall_s) / b.wall_s))
    out.sort()
    return out


def write_csv(records: list[BenchRecord], path) -> None:
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(CSV_HEADER)
        for rec in records:
            writer.writerow([
                rec.algorithm,
                rec.raster_id,
                rec.cells,
                f"{rec.pct_depression:.3f}",
                rec.backend,
                f"{rec.wall_s:.6f}",
            ])
