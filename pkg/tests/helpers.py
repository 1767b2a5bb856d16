"""Shared test machinery: random rasters, a sorted-multiset queue model, and
an instrumented pure-Python fill built on the library's queue classes.

The pure-Python fill is deliberately a straightforward transcription of the
flooding procedure. Comparing it against the compiled kernels on small grids
checks that the kernels' embedded queues behave exactly like the exported
structures, and its counters expose invariants (each cell pushed and popped
exactly once, pop priorities non-decreasing) that the kernels don't surface.
"""

import math
from dataclasses import dataclass

import numpy as np

from floodfill import Raster, Connectivity, neighbors, edge_cells
from floodfill.queues import BucketQueue, FifoQueue, TotalOrderHeap


def random_raster(rng, nrows=None, ncols=None, nodata_frac=0.0, lo=0.0, hi=100.0,
                  integral=False, nodata_value=-9999.0) -> Raster:
    if nrows is None:
        nrows = int(rng.integers(2, 33))
    if ncols is None:
        ncols = int(rng.integers(2, 33))
    z = rng.uniform(lo, hi, (nrows, ncols))
    if integral:
        z = np.floor(z)
    if nodata_frac > 0:
        mask = rng.random((nrows, ncols)) < nodata_frac
        z[mask] = nodata_value
    return Raster(values=z, nodata_value=nodata_value)


class SortedModel:
    """Reference priority queue: keeps the live multiset, pops by sorting."""

    def __init__(self):
        self.items = []
        self.serial = 0

    def push(self, priority, cell=None):
        self.items.append((priority, self.serial, cell))
        self.serial += 1

    def pop(self):
        best = min(self.items, key=lambda t: (t[0], t[1]))
        self.items.remove(best)
        return best

    def peek_min_priority(self):
        if not self.items:
            return None
        return min(self.items, key=lambda t: (t[0], t[1]))[0]

    def __len__(self):
        return len(self.items)


@dataclass
class FloodStats:
    pushes: int
    pops: int
    pop_priorities: list

    @property
    def pops_monotone(self) -> bool:
        seq = self.pop_priorities
        return all(a <= b for a, b in zip(seq, seq[1:]))


NEG_INF = float("-inf")


def python_fill(dem: Raster, conn: Connectivity, improved: bool,
                backend: str = "heap") -> tuple[Raster, FloodStats]:
    """Pure-Python priority flood over the exported queue structures."""
    mask = dem.nodata_mask()
    w = dem.values.copy()
    w[mask] = NEG_INF
    if backend == "bucket":
        data = dem.values[~mask]
        lo = int(data.min()) if data.size else 0
        hi = int(data.max()) if data.size else 0
        # offset-1 is the sub-minimum bucket playing the role of -inf
        nodata_key = lo - 1
        open_q = BucketQueue(offset=lo - 1, nbuckets=hi - lo + 2)
    else:
        nodata_key = NEG_INF
        open_q = TotalOrderHeap()

    def key(cell):
        v = w[cell]
        return nodata_key if v == NEG_INF else v
    pit = FifoQueue()
    closed = np.zeros(dem.shape, dtype=bool)
    stats = FloodStats(0, 0, [])
    for cell in edge_cells(dem):
        closed[cell] = True
        open_q.push(key(cell), cell)
        stats.pushes += 1
    while len(open_q) or len(pit):
        if improved and len(pit):
            c = pit.pop()
        else:
            c = open_q.pop().cell
        stats.pops += 1
        zc = w[c]
        stats.pop_priorities.append(key(c))
        for n in neighbors(dem, c, conn):
            if closed[n]:
                continue
            closed[n] = True
            if improved:
                if w[n] <= zc:
                    w[n] = zc
                    pit.push(n)
                else:
                    open_q.push(key(n), n)
            else:
                if w[n] < zc:
                    w[n] = zc
                open_q.push(key(n), n)
            stats.pushes += 1
    w[mask] = dem.nodata_value
    return dem.with_values(w), stats


def fig1_raster(wall=9.9) -> tuple[Raster, list]:
    """The 9-cell cross-section profile embedded as the middle row of a 3x9
    raster between high walls, plus its expected filled middle row."""
    profile = [0.3, 0.9, 1.2, 0.7, 0.9, 0.7, 1.5, 0.5, 0.2]
    expected = [0.3, 0.9, 1.2, 1.2, 1.2, 1.2, 1.5, 0.5, 0.2]
    vals = np.full((3, 9), wall)
    vals[1, :] = profile
    return Raster(values=vals), expected


def single_pit_raster() -> Raster:
    """5x5 bowl: perimeter 2.0, inner ring 5.0 with a 3.0 outlet on the west
    side, center 1.0."""
    z = np.full((5, 5), 5.0)
    z[0, :] = z[-1, :] = z[:, 0] = z[:, -1] = 2.0
    z[2, 1] = 3.0
    z[2, 2] = 1.0
    return Raster(values=z)


def precision_limit_raster() -> Raster:
    """A flat channel at huge magnitude: ulp steps accumulate past a bump
    that stands above the channel's entry level, forcing a pit-top warning."""
    base = 1.0e15  # ulp(1e15) == 0.125
    ulp = math.ulp(base)
    z = np.full((3, 12), base + 80.0)
    z[1, 0] = base
    z[1, 1:9] = base
    z[1, 9] = base + 2 * ulp
    z[1, 10] = base + 2 * ulp
    z[1, 11] = base + 80.0
    return Raster(values=z)
