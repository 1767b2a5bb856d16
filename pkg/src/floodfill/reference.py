"""Independent correctness machinery: a naive fixpoint fill, the fill-criteria
verifiers, and synthetic test terrain.

The fixpoint fill is the simple sweep-until-stable variant: slow by design,
but an entirely different computation from priority flooding, which makes
exact agreement between the two a strong correctness signal.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

from . import _kernels
from .raster import CellIndex, Connectivity, Raster

__all__ = [
    "VerificationResult",
    "ConvergenceError",
    "planchon_darboux_fill",
    "verify_fill",
    "synth_dem",
    "SYNTH_KINDS",
]

DEFAULT_SWEEP_CYCLE = (0, 1, 2, 3)


class ConvergenceError(RuntimeError):
    """The fixpoint iteration hit its sweep cap without stabilizing."""


@dataclass(frozen=True)
class VerificationResult:
    """Outcome of checking a fill against the three defining criteria.

    criterion1: surface never below the terrain.
    criterion2: every data cell drains to the edge (strictly, if requested).
    criterion3: surface equals the fixpoint oracle exactly (None when the
    check was skipped, i.e. in strict mode).
    """

    criterion1_ok: bool
    criterion2_ok: bool
    criterion3_ok: Optional[bool]
    first_failure: Optional[tuple[CellIndex, str]] = None

    @property
    def all_ok(self) -> bool:
        return (
            self.criterion1_ok
            and self.criterion2_ok
            and (self.criterion3_ok is not False)
        )


def planchon_darboux_fill(
    dem: Raster,
    conn: Connectivity = Connectivity.EIGHT,
    eps: float = 0.0,
    sweep_cycle: tuple[int, ...] = DEFAULT_SWEEP_CYCLE,
) -> Raster:
    """Depression fill by flooding everything and draining from the edges.

    Interior cells start at +inf and relax under
    ``w(c) = max(z(c), min over neighbors of w(n) + eps)`` with edge cells
    pinned to the terrain, swept in alternating scan directions until a
    sweep changes nothing. For eps = 0 the result is the exact minimal
    draining surface; the scan order only affects how fast it is reached.
    """
    if eps < 0:
        raise ValueError(f"eps must be >= 0, got {eps}")
    if not sweep_cycle or any(m not in (0, 1, 2, 3) for m in sweep_cycle):
        raise ValueError(f"sweep_cycle must draw from modes 0..3, got {sweep_cycle}")
    mask = dem.nodata_mask().ravel()
    zp = dem.values.ravel().copy()
    zp[mask] = -np.inf
    max_sweeps = 4 * dem.size
    w, sweeps = _kernels.planchon_darboux(
        zp, dem.nrows, dem.ncols, conn.value, float(eps),
        np.asarray(sweep_cycle, dtype=np.int64), max_sweeps,
    )
    if sweeps < 0:
        raise ConvergenceError(
            f"no fixpoint after {max_sweeps} sweeps (eps={eps}); "
            "this cannot happen for eps=0"
        )
    w[mask] = dem.nodata_value
    return dem.with_values(w.reshape(dem.shape))


def verify_fill(
    z: Raster,
    w: Raster,
    conn: Connectivity = Connectivity.EIGHT,
    strict: bool = False,
) -> VerificationResult:
    """Check a claimed fill ``w`` of terrain ``z`` against the fill criteria.

    Criterion 2 runs a reverse flood out of the drains (edge cells, plus
    cells beside NoData, since stepping into NoData always descends).
    Criterion 3 compares against the fixpoint oracle and is only meaningful
    for plain fills, so it is skipped when ``strict`` is set.
    """
    if z.shape != w.shape:
        raise ValueError(f"dimension mismatch: {z.shape} vs {w.shape}")
    zmask = z.nodata_mask()
    if not np.array_equal(zmask, w.nodata_mask()):
        raise ValueError("NoData masks of terrain and fill differ")

    first_failure = None
    data = ~zmask

    below = data & (w.values < z.values)
    c1 = not below.any()
    if not c1:
        r, c = map(int, np.argwhere(below)[0])
        first_failure = (CellIndex(r, c), f"w={w.values[r, c]!r} < z={z.values[r, c]!r}")

    idx = _kernels.drainage_check(
        w.values.ravel(), zmask.ravel(), z.nrows, z.ncols, conn.value, strict
    )
    c2 = idx == -1
    if not c2 and first_failure is None:
        cell = CellIndex(int(idx) // z.ncols, int(idx) % z.ncols)
        kind = "strictly-descending" if strict else "non-ascending"
        first_failure = (cell, f"no {kind} path to the edge")

    c3: Optional[bool] = None
    if not strict:
        oracle = planchon_darboux_fill(z, conn, eps=0.0)
        c3 = bool(np.array_equal(w.values, oracle.values))
        if not c3 and first_failure is None:
            diff = w.values != oracle.values
            r, c = map(int, np.argwhere(diff)[0])
            first_failure = (
                CellIndex(r, c),
                f"w={w.values[r, c]!r} != minimal fill {oracle.values[r, c]!r}",
            )

    return VerificationResult(c1, c2, c3, first_failure)


SYNTH_KINDS = ("slope", "pits", "nested", "plateau", "noise")


def synth_dem(
    kind: str,
    nrows: int,
    ncols: int,
    seed: int,
    *,
    n_pits: Optional[int] = None,
    levels: int = 6,
    integral: bool = False,
) -> Raster:
    """Deterministic synthetic terrain for tests and benchmarks.

    kinds: ``slope`` (monotone plane, zero depressions), ``pits`` (gentle
    slope with ``n_pits`` random basins carved out), ``nested`` (concentric
    basins inside basins), ``plateau`` (a few constant-elevation regions,
    exercising equal-priority ordering), ``noise`` (uniform random).
    ``integral`` floors all values onto whole units for bucket-queue work.
    """
    if kind not in SYNTH_KINDS:
        raise ValueError(f"unknown kind {kind!r}; expected one of {SYNTH_KINDS}")
    if nrows < 2 or ncols < 2:
        raise ValueError(f"dims must be at least 2x2, got {nrows}x{ncols}")
    rng = np.random.default_rng(seed)
    rr, cc = np.mgrid[0:nrows, 0:ncols].astype(np.float64)

    if kind == "slope":
        z = 2.0 * (ncols - 1 - cc) + 1.0 * (nrows - 1 - rr) + 5.0

    elif kind == "noise":
        z = rng.uniform(0.0, 100.0, size=(nrows, ncols))

    elif kind == "pits":
        k = n_pits if n_pits is not None else max(1, (nrows * ncols) // 512)
        # Noise stays below the per-cell gradient so the base plane drains
        # everywhere and only the carved bowls form depressions.
        z = 0.05 * (cc + rr) + rng.uniform(0.0, 0.04, size=(nrows, ncols)) + 50.0
        max_radius = max(3.0, min(nrows, ncols) / 6.0)
        for _ in range(k):
            pr = rng.uniform(1.0, nrows - 2.0)
            pc = rng.uniform(1.0, ncols - 2.0)
            radius = rng.uniform(2.5, max_radius)
            depth = rng.uniform(8.0, 40.0)
            r0 = max(0, int(pr - radius))
            r1 = min(nrows, int(pr + radius) + 2)
            c0 = max(0, int(pc - radius))
            c1 = min(ncols, int(pc + radius) + 2)
            wr = rr[r0:r1, c0:c1]
            wc = cc[r0:r1, c0:c1]
            bowl = 1.0 - ((wr - pr) ** 2 + (wc - pc) ** 2) / (radius * radius)
            z[r0:r1, c0:c1] -= depth * np.where(bowl > 0.0, bowl, 0.0)

    elif kind == "nested":
        pr = nrows / 2.0 + rng.uniform(-nrows / 8.0, nrows / 8.0)
        pc = ncols / 2.0 + rng.uniform(-ncols / 8.0, ncols / 8.0)
        d = np.sqrt((rr - pr) ** 2 + (cc - pc) ** 2)
        span = min(nrows, ncols) / 2.0
        # Outer bowl with interior rim rings: each ring walls off a deeper
        # inner basin whose rim sits below the next one out.
        z = 100.0 - 60.0 * np.exp(-((d / span) ** 2))
        for frac, height in ((0.22, 18.0), (0.45, 30.0), (0.7, 45.0)):
            ring = frac * span
            width = 0.05 * span + 1.0
            z = z + height * np.exp(-(((d - ring) / width) ** 2))
        z = z + rng.uniform(0.0, 0.5, size=(nrows, ncols))

    else:  # plateau
        field = np.zeros((nrows, ncols))
        for _ in range(4):
            fr = rng.uniform(0.5, 3.0)
            fc = rng.uniform(0.5, 3.0)
            phr = rng.uniform(0.0, 2.0 * math.pi)
            phc = rng.uniform(0.0, 2.0 * math.pi)
            field = field + np.sin(fr * math.pi * rr / nrows + phr) * np.cos(
                fc * math.pi * cc / ncols + phc
            )
        # Distinct non-integral elevations per level: terraces stay flat but
        # ulp-steppable for the gradient-enforcing fill.
        level_values = np.sort(rng.uniform(5.0, 95.0, size=levels))
        edges = np.linspace(field.min(), field.max(), levels + 1)[1:-1]
        z = level_values[np.digitize(field, edges)]

    if integral:
        z = np.floor(z)
    return Raster(values=z)
