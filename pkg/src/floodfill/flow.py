"""Flow direction assignment by depression carving.

Instead of raising terrain, the flood assigns each cell a pointer toward the
cell that claimed it, so depressions drain through their lowest outlet while
every elevation inside them still shapes the routing. Direction codes:

====  =========================================
code  meaning
====  =========================================
0     drains off the grid edge
1..8  toward the N, E, S, W, NE, SE, SW, NW neighbor
-1    NoData
====  =========================================
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import _kernels
from .raster import CellIndex, Connectivity, Raster

__all__ = [
    "FlowField",
    "FlowCycleError",
    "priority_flood_flowdirs",
    "trace_path",
    "flow_field_is_valid",
    "flow_to_raster",
    "DIR_OFFSETS",
    "ESRI_CODES",
]

# code -> (drow, dcol); index 0 unused
DIR_OFFSETS = (
    (0, 0),
    (-1, 0),   # 1 N
    (0, 1),    # 2 E
    (1, 0),    # 3 S
    (0, -1),   # 4 W
    (-1, 1),   # 5 NE
    (1, 1),    # 6 SE
    (1, -1),   # 7 SW
    (-1, -1),  # 8 NW
)

# Our 1..8 codes in ESRI power-of-two convention (E=1, SE=2, ... clockwise).
ESRI_CODES = {1: 64, 2: 1, 3: 4, 4: 16, 5: 128, 6: 2, 7: 8, 8: 32}


class FlowCycleError(RuntimeError):
    """A pointer chain revisited a cell: the flow field is broken."""


@dataclass(frozen=True, eq=False)
class FlowField:
    """Per-cell D8 flow codes with the dims of the source raster."""

    dirs: np.ndarray

    def __post_init__(self):
        arr = np.ascontiguousarray(self.dirs, dtype=np.int8)
        arr.flags.writeable = False
        object.__setattr__(self, "dirs", arr)

    @property
    def shape(self) -> tuple[int, int]:
        return self.dirs.shape

    def __eq__(self, other) -> bool:
        if not isinstance(other, FlowField):
            return NotImplemented
        return bool(np.array_equal(self.dirs, other.dirs))


def priority_flood_flowdirs(dem: Raster,
                            conn: Connectivity = Connectivity.EIGHT) -> FlowField:
    """Assign a drainage direction to every data cell.

    Edge data cells point off the grid (code 0); each interior data cell
    points toward the cell whose pop claimed it, cardinals before diagonals.
    The input raster is not modified. Data cells next to NoData may point
    into it: islands drain through NoData, which is lower than all terrain.
    """
    mask = dem.nodata_mask().ravel()
    zp = dem.values.ravel().copy()
    zp[mask] = -np.inf
    dirs = _kernels.flow_directions(zp, dem.nrows, dem.ncols, conn.value)
    if (dirs == -2).any():
        raise AssertionError("flow direction kernel left cells unassigned")
    return FlowField(dirs.reshape(dem.shape))


def trace_path(f: FlowField, start: CellIndex) -> list[CellIndex]:
    """Follow flow pointers from ``start`` until the flow leaves the DEM.

    The path ends at a code-0 cell or at the last data cell before a step
    into NoData. Raises :class:`FlowCycleError` if the chain revisits any
    cell, and ValueError for a NoData start.
    """
    nrows, ncols = f.shape
    dirs = f.dirs
    if dirs[start.row, start.col] == -1:
        raise ValueError(f"cannot trace from NoData cell {start}")
    path = [CellIndex(start.row, start.col)]
    r, c = start.row, start.col
    limit = nrows * ncols
    while True:
        d = int(dirs[r, c])
        if d == 0:
            return path
        dr, dc = DIR_OFFSETS[d]
        r, c = r + dr, c + dc
        if not (0 <= r < nrows and 0 <= c < ncols):
            raise FlowCycleError(f"pointer leaves the grid at {path[-1]}")
        if dirs[r, c] == -1:
            return path  # drains into NoData
        if len(path) >= limit:
            raise FlowCycleError(f"cycle detected on path from {start}")
        path.append(CellIndex(r, c))


def flow_field_is_valid(f: FlowField) -> bool:
    """True when every data cell's chain terminates off-DEM without cycles."""
    nrows, ncols = f.shape
    return _kernels.flow_paths_check(f.dirs.ravel(), nrows, ncols) == -1


def flow_to_raster(f: FlowField, template: Raster, esri: bool = False) -> Raster:
    """Flow codes as an integer-valued raster sharing ``template``'s header.

    With ``esri`` the 1..8 codes are converted to the ESRI power-of-two
    convention; code 0 stays 0. NoData is -1 in both schemes.
    """
    vals = f.dirs.astype(np.float64)
    if esri:
        out = np.zeros_like(vals)
        for code, esri_code in ESRI_CODES.items():
            out[vals == code] = esri_code
        out[vals == -1] = -1.0
        vals = out
    return Raster(
        values=vals,
        cellsize=template.cellsize,
        xllcorner=template.xllcorner,
        yllcorner=template.yllcorner,
        nodata_value=-1.0,
    )
