import numpy as np
import pytest

from floodfill import (
    Connectivity,
    Raster,
    improved_priority_flood,
    planchon_darboux_fill,
    priority_flood,
    priority_flood_epsilon,
    priority_flood_flowdirs,
    priority_flood_watersheds,
    verify_fill,
)


@pytest.fixture(scope="session", autouse=True)
def warm_kernels():
    """Compile every numba kernel on a tiny raster before any test runs, so
    JIT time never contaminates timing assertions."""
    z = np.array([[3.0, 2.0, 4.0], [2.0, 1.0, 5.0], [4.0, 3.0, 2.0]])
    dem = Raster(values=z)
    intdem = Raster(values=np.floor(z))
    for conn in (Connectivity.FOUR, Connectivity.EIGHT):
        priority_flood(dem, conn)
        improved_priority_flood(dem, conn)
        improved_priority_flood(intdem, conn, backend="bucket")
        priority_flood(intdem, conn, backend="bucket")
        priority_flood_epsilon(dem, conn)
        priority_flood_flowdirs(dem, conn)
        priority_flood_watersheds(dem, conn, also_fill=True)
        planchon_darboux_fill(dem, conn)
        w, _ = priority_flood(dem, conn)
        verify_fill(dem, w, conn)
        verify_fill(dem, w, conn, strict=True)
