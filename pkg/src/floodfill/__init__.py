"""Depression filling, flow routing, and watershed labeling for DEMs.

The library floods elevation grids inward from their edges through a
min-priority queue; the popped cell is always the lowest one guaranteed to
drain, which yields optimal depression filling, gradient enforcement,
depression-carving flow directions, and watershed labels from one family of
sweeps. A naive fixpoint fill and criteria verifiers provide independent
correctness checks, and a CLI exposes everything on ESRI ASCII grids.
"""

from .raster import (
    CellIndex,
    Connectivity,
    GridFormatError,
    Raster,
    edge_cells,
    load_ascii_grid,
    neighbors,
    save_ascii_grid,
)
from .queues import (
    BucketQueue,
    BucketRangeError,
    FifoQueue,
    MonotonicityError,
    QueueEmptyError,
    QueueEntry,
    TotalOrderHeap,
)
from .fill import (
    FillReport,
    improved_priority_flood,
    priority_flood,
    priority_flood_epsilon,
)
from .flow import (
    FlowCycleError,
    FlowField,
    flow_field_is_valid,
    flow_to_raster,
    priority_flood_flowdirs,
    trace_path,
)
from .watershed import (
    LabelField,
    NODATA_LABEL,
    UnfinalizedLabelsError,
    canonical_labels,
    priority_flood_watersheds,
    watershed_boundaries,
)
from .reference import (
    VerificationResult,
    planchon_darboux_fill,
    synth_dem,
    verify_fill,
)

__version__ = "0.1.0"

__all__ = [
    "Raster",
    "CellIndex",
    "Connectivity",
    "GridFormatError",
    "load_ascii_grid",
    "save_ascii_grid",
    "neighbors",
    "edge_cells",
    "QueueEntry",
    "TotalOrderHeap",
    "BucketQueue",
    "FifoQueue",
    "QueueEmptyError",
    "MonotonicityError",
    "BucketRangeError",
    "FillReport",
    "priority_flood",
    "improved_priority_flood",
    "priority_flood_epsilon",
    "FlowField",
    "FlowCycleError",
    "priority_flood_flowdirs",
    "trace_path",
    "flow_field_is_valid",
    "flow_to_raster",
    "LabelField",
    "NODATA_LABEL",
    "UnfinalizedLabelsError",
    "priority_flood_watersheds",
    "watershed_boundaries",
    "canonical_labels",
    "VerificationResult",
    "planchon_darboux_fill",
    "verify_fill",
    "synth_dem",
    "__version__",
]
