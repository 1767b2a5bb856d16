"""Watershed labeling by priority flooding.

Every cell draining to a common point on the grid edge receives a common
positive label. The flood runs inward from the edges on the raw DEM; cells
inside depressions are carried on the pit queue at their outlet's spill
elevation, so labels cross pits without terrain modification. Optionally the
same sweep also emits the depression-filled surface.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

import numpy as np

from . import _kernels
from .fill import _finish
from .raster import NEIGHBOR_OFFSETS, Connectivity, Raster

__all__ = [
    "LabelField",
    "UnfinalizedLabelsError",
    "NODATA_LABEL",
    "priority_flood_watersheds",
    "watershed_boundaries",
    "canonical_labels",
]

# Exported NoData label; also the header sentinel of saved label grids.
NODATA_LABEL = -9999


class UnfinalizedLabelsError(ValueError):
    """The label field still contains candidate or queued markers."""


@dataclass(frozen=True, eq=False)
class LabelField:
    """Per-cell watershed labels: positive integers, or NODATA_LABEL."""

    labels: np.ndarray
    n_watersheds: int

    def __post_init__(self):
        arr = np.ascontiguousarray(self.labels, dtype=np.int64)
        arr.flags.writeable = False
        object.__setattr__(self, "labels", arr)

    @property
    def shape(self) -> tuple[int, int]:
        return self.labels.shape

    def __eq__(self, other) -> bool:
        if not isinstance(other, LabelField):
            return NotImplemented
        return self.n_watersheds == other.n_watersheds and bool(
            np.array_equal(self.labels, other.labels)
        )

    def to_raster(self, template: Raster) -> Raster:
        """Labels as an integer-valued raster sharing ``template``'s header."""
        return Raster(
            values=self.labels.astype(np.float64),
            cellsize=template.cellsize,
            xllcorner=template.xllcorner,
            yllcorner=template.yllcorner,
            nodata_value=float(NODATA_LABEL),
        )


def priority_flood_watersheds(
    dem: Raster,
    conn: Connectivity = Connectivity.EIGHT,
    also_fill: bool = False,
) -> tuple[LabelField, Optional[Raster]]:
    """Partition the data cells of ``dem`` into edge-draining watersheds.

    A new label is minted whenever a still-queued data cell is popped, which
    covers both edge seeds and cells first reached through NoData. Labels are
    consecutive integers starting at 1; NoData cells get NODATA_LABEL.

    With ``also_fill`` the filled raster is returned as well, computed in the
    same sweep and identical to :func:`floodfill.fill.priority_flood` output.
    """
    mask = dem.nodata_mask().ravel()
    zp = dem.values.ravel().copy()
    zp[mask] = -np.inf
    labels, w, count = _kernels.watershed_labels(
        zp, dem.nrows, dem.ncols, conn.value, also_fill
    )
    labels[mask] = NODATA_LABEL
    if ((~mask) & (labels < 1)).any():
        raise AssertionError("watershed kernel left unlabeled data cells")
    field = LabelField(labels.reshape(dem.shape), n_watersheds=int(count))
    if not also_fill:
        return field, None
    filled, _ = _finish(dem, w, mask, "heap")
    return field, filled


def _check_finalized(labels: np.ndarray) -> None:
    if ((labels == 0) | (labels == -1)).any():
        raise UnfinalizedLabelsError(
            "label field contains candidate/queued cells; run the flood to completion"
        )


def watershed_boundaries(l: LabelField, conn: Connectivity = Connectivity.EIGHT) -> np.ndarray:
    """Boolean mask of boundary cells between watersheds.

    For each adjacent pair with differing positive labels, the cell bearing
    the *lower* label is marked, so every internal divide is one cell wide
    on a consistent side.
    """
    labels = l.labels
    _check_finalized(labels)
    nrows, ncols = labels.shape
    mask = np.zeros((nrows, ncols), dtype=bool)
    count = 4 if conn is Connectivity.FOUR else 8
    for dr, dc in NEIGHBOR_OFFSETS[:count]:
        src_r = slice(max(0, -dr), nrows - max(0, dr))
        src_c = slice(max(0, -dc), ncols - max(0, dc))
        nbr_r = slice(max(0, dr), nrows - max(0, -dr))
        nbr_c = slice(max(0, dc), ncols - max(0, -dc))
        a = labels[src_r, src_c]
        b = labels[nbr_r, nbr_c]
        mask[src_r, src_c] |= (a > 0) & (b > 0) & (a < b)
    return mask


def canonical_labels(l: LabelField) -> LabelField:
    """Renumber labels to 1..k by first occurrence in row-major order.

    The result depends only on the partition, not the incoming numbering, so
    any permutation of the labels canonicalizes to the same field.
    """
    labels = l.labels
    _check_finalized(labels)
    out = np.full(labels.shape, NODATA_LABEL, dtype=np.int64)
    flat = labels.ravel()
    pos = flat > 0
    vals = flat[pos]
    if vals.size:
        uniq, first, inv = np.unique(vals, return_index=True, return_inverse=True)
        rank = np.empty(len(uniq), dtype=np.int64)
        rank[np.argsort(first, kind="stable")] = np.arange(1, len(uniq) + 1)
        out.ravel()[pos] = rank[inv]
        k = len(uniq)
    else:
        k = 0
    return LabelField(out, n_watersheds=k)
