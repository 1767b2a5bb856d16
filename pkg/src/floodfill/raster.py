"""Grid data model and ESRI ASCII grid I/O.

A :class:`Raster` is a rectangular grid of float64 elevations with a NoData
sentinel and a geospatial header. Row 0 is the top (north) row, matching the
ESRI ASCII convention. Values are frozen after construction and safe to share
across threads for reading; operations that modify terrain return new
rasters.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace
from enum import Enum
from typing import NamedTuple

import numpy as np

__all__ = [
    "Raster",
    "CellIndex",
    "Connectivity",
    "GridFormatError",
    "load_ascii_grid",
    "save_ascii_grid",
    "neighbors",
    "edge_cells",
    "format_value",
]

DEFAULT_NODATA = -9999.0


class GridFormatError(ValueError):
    """Raised when an ASCII grid file cannot be parsed or violates invariants."""


class CellIndex(NamedTuple):
    row: int
    col: int


class Connectivity(Enum):
    FOUR = 4
    EIGHT = 8


# Neighbor offsets in the fixed processing order: N, E, S, W, NE, SE, SW, NW.
# Cardinals come before diagonals; each group runs clockwise from north.
NEIGHBOR_OFFSETS = (
    (-1, 0),   # N
    (0, 1),    # E
    (1, 0),    # S
    (0, -1),   # W
    (-1, 1),   # NE
    (1, 1),    # SE
    (1, -1),   # SW
    (-1, -1),  # NW
)


@dataclass(frozen=True, eq=False)
class Raster:
    """An elevation grid plus its georeferencing header.

    ``values`` is an (nrows, ncols) float64 array. Every cell is either a
    finite elevation or exactly ``nodata_value``; NaN and infinities are
    rejected. NoData sorts below every data value in all flooding operations
    regardless of the sentinel's numeric magnitude.

    Construction takes ownership of ``values`` and freezes it in place when
    no dtype/layout conversion is needed; pass a copy to keep a mutable one.
    """

    values: np.ndarray
    cellsize: float = 1.0
    xllcorner: float = 0.0
    yllcorner: float = 0.0
    nodata_value: float = DEFAULT_NODATA

    def __post_init__(self):
        arr = np.ascontiguousarray(self.values, dtype=np.float64)
        if arr.ndim != 2 or arr.shape[0] < 1 or arr.shape[1] < 1:
            raise GridFormatError(f"raster must be 2-D and non-empty, got shape {arr.shape}")
        if not (math.isfinite(self.cellsize) and self.cellsize > 0):
            raise GridFormatError(f"cellsize must be positive, got {self.cellsize}")
        if math.isnan(self.nodata_value):
            raise GridFormatError("nodata_value may not be NaN")
        bad = ~(np.isfinite(arr) | (arr == self.nodata_value))
        if bad.any():
            r, c = np.argwhere(bad)[0]
            raise GridFormatError(
                f"cell ({r}, {c}) is {arr[r, c]!r}: values must be finite or equal "
                f"to the NoData sentinel {self.nodata_value!r}"
            )
        arr.flags.writeable = False
        object.__setattr__(self, "values", arr)

    @property
    def nrows(self) -> int:
        return self.values.shape[0]

    @property
    def ncols(self) -> int:
        return self.values.shape[1]

    @property
    def shape(self) -> tuple[int, int]:
        return self.values.shape

    @property
    def size(self) -> int:
        return self.values.size

    def nodata_mask(self) -> np.ndarray:
        """Boolean array, True where the cell is NoData."""
        return self.values == self.nodata_value

    def is_nodata(self, cell: CellIndex) -> bool:
        return bool(self.values[cell.row, cell.col] == self.nodata_value)

    def data_cell_count(self) -> int:
        return int((~self.nodata_mask()).sum())

    def with_values(self, values: np.ndarray) -> "Raster":
        """New raster sharing this header with different cell values."""
        return replace(self, values=values)

    def __eq__(self, other) -> bool:
        if not isinstance(other, Raster):
            return NotImplemented
        return (
            self.shape == other.shape
            and self.cellsize == other.cellsize
            and self.xllcorner == other.xllcorner
            and self.yllcorner == other.yllcorner
            and self.nodata_value == other.nodata_value
            and bool(np.array_equal(self.values, other.values))
        )

    def __repr__(self) -> str:
        return (
            f"Raster({self.nrows}x{self.ncols}, cellsize={self.cellsize}, "
            f"nodata={self.nodata_value})"
        )


def neighbors(r: Raster, c: CellIndex, conn: Connectivity = Connectivity.EIGHT) -> list[CellIndex]:
    """In-bounds neighbors of ``c`` in the fixed order N, E, S, W, NE, SE, SW, NW.

    FOUR connectivity yields only the cardinal prefix. Boundary cells yield
    fewer neighbors; the order of the survivors is preserved.
    """
    nrows, ncols = r.shape
    count = 4 if conn is Connectivity.FOUR else 8
    if not (0 <= c.row < nrows and 0 <= c.col < ncols):
        raise IndexError(f"cell {c} out of bounds for {nrows}x{ncols} raster")
    out = []
    for dr, dc in NEIGHBOR_OFFSETS[:count]:
        nr, nc = c.row + dr, c.col + dc
        if 0 <= nr < nrows and 0 <= nc < ncols:
            out.append(CellIndex(nr, nc))
    return out


def edge_cells(r: Raster) -> list[CellIndex]:
    """Perimeter cells, each exactly once.

    Order: top row left-to-right, bottom row left-to-right, then the remaining
    left column top-to-bottom and right column top-to-bottom. This order also
    fixes the seeding order of all flooding operations, which makes equal
    elevation tie-breaking reproducible.
    """
    nrows, ncols = r.shape
    cells = [CellIndex(0, c) for c in range(ncols)]
    if nrows > 1:
        cells.extend(CellIndex(nrows - 1, c) for c in range(ncols))
    for row in range(1, nrows - 1):
        cells.append(CellIndex(row, 0))
    if ncols > 1:
        for row in range(1, nrows - 1):
            cells.append(CellIndex(row, ncols - 1))
    return cells


def format_value(v: float) -> str:
    """Shortest decimal text that parses back to exactly ``v``.

    Integral values drop the trailing ``.0`` for compactness; either spelling
    round-trips to the same float64.
    """
    f = float(v)
    if f.is_integer() and abs(f) < 2**53:
        return str(int(f))
    return repr(f)


_HEADER_KEYS = ("ncols", "nrows", "xllcorner", "yllcorner", "cellsize", "nodata_value")


def load_ascii_grid(path) -> Raster:
    """Read an ESRI ASCII grid file.

    The header must supply ncols, nrows, xllcorner, yllcorner and cellsize;
    NODATA_value is optional and defaults to -9999. Keys are case-insensitive.
    Data tokens are read top row first and must number exactly nrows*ncols.
    """
    with open(path, "r") as fh:
        text = fh.read()
    lines = text.splitlines()
    header: dict[str, float] = {}
    i = 0
    while i < len(lines):
        parts = lines[i].split()
        if len(parts) != 2 or parts[0].lower() not in _HEADER_KEYS:
            break
        key = parts[0].lower()
        if key in header:
            raise GridFormatError(f"{path}: duplicate header key {key!r}")
        try:
            header[key] = float(parts[1])
        except ValueError as exc:
            raise GridFormatError(f"{path}: bad header value in line {lines[i]!r}") from exc
        i += 1
    for key in ("ncols", "nrows", "xllcorner", "yllcorner", "cellsize"):
        if key not in header:
            raise GridFormatError(f"{path}: missing header key {key!r}")
    ncols = int(header["ncols"])
    nrows = int(header["nrows"])
    if ncols != header["ncols"] or nrows != header["nrows"] or ncols < 1 or nrows < 1:
        raise GridFormatError(f"{path}: ncols/nrows must be positive integers")
    nodata = header.get("nodata_value", DEFAULT_NODATA)

    tokens = " ".join(lines[i:]).split()
    if len(tokens) != nrows * ncols:
        raise GridFormatError(
            f"{path}: expected {nrows * ncols} data values, found {len(tokens)}"
        )
    try:
        values = np.array([float(t) for t in tokens], dtype=np.float64)
    except ValueError as exc:
        raise GridFormatError(f"{path}: non-numeric data token") from exc
    if np.isnan(values).any():
        raise GridFormatError(f"{path}: NaN is not a valid cell value")
    try:
        return Raster(
            values=values.reshape(nrows, ncols),
            cellsize=header["cellsize"],
            xllcorner=header["xllcorner"],
            yllcorner=header["yllcorner"],
            nodata_value=nodata,
        )
    except GridFormatError as exc:
        raise GridFormatError(f"{path}: {exc}") from exc


def save_ascii_grid(r: Raster, path) -> None:
    """Write ``r`` as an ESRI ASCII grid, value-for-value round-trip exact.

    The NODATA_value line is always written. NoData cells are emitted as the
    literal sentinel token.
    """
    with open(path, "w") as fh:
        fh.write(f"ncols {r.ncols}\n")
        fh.write(f"nrows {r.nrows}\n")
        fh.write(f"xllcorner {format_value(r.xllcorner)}\n")
        fh.write(f"yllcorner {format_value(r.yllcorner)}\n")
        fh.write(f"cellsize {format_value(r.cellsize)}\n")
        fh.write(f"NODATA_value {format_value(r.nodata_value)}\n")
        for row in r.values:
            fh.write(" ".join(format_value(v) for v in row))
            fh.write("\n")
