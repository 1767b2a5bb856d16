"""Watershed labeling: partitions, boundaries, cross-validation against flow
path grouping."""

import numpy as np
import pytest

from floodfill import (
    CellIndex,
    Connectivity,
    LabelField,
    NODATA_LABEL,
    Raster,
    UnfinalizedLabelsError,
    canonical_labels,
    improved_priority_flood,
    priority_flood_flowdirs,
    priority_flood_watersheds,
    trace_path,
    watershed_boundaries,
)
from floodfill.reference import synth_dem
from helpers import random_raster, single_pit_raster


class TestBasicPartition:
    def test_every_data_cell_labeled_positive(self):
        rng = np.random.default_rng(71)
        for i in range(40):
            dem = random_raster(rng, nodata_frac=0.15 if i % 3 == 0 else 0.0)
            labels, _ = priority_flood_watersheds(dem)
            nodata = dem.nodata_mask()
            assert (labels.labels[nodata] == NODATA_LABEL).all()
            data_labels = labels.labels[~nodata]
            assert (data_labels >= 1).all()
            uniq = np.unique(data_labels)
            assert labels.n_watersheds == len(uniq)
            # labels are consecutive from 1
            assert uniq.tolist() == list(range(1, len(uniq) + 1))

    def test_all_nodata(self):
        dem = Raster(values=np.full((4, 6), -9999.0))
        labels, _ = priority_flood_watersheds(dem)
        assert (labels.labels == NODATA_LABEL).all()
        assert labels.n_watersheds == 0

    def test_single_pit_shares_outlet_label(self):
        dem = single_pit_raster()
        labels, _ = priority_flood_watersheds(dem)
        l = labels.labels
        assert l[2, 2] == l[2, 1], "pit must inherit its spill path's label"

    def test_determinism(self):
        dem = random_raster(np.random.default_rng(72), 20, 20)
        a, _ = priority_flood_watersheds(dem)
        b, _ = priority_flood_watersheds(dem)
        assert a == b


class TestAlsoFill:
    def test_matches_plain_fill(self):
        rng = np.random.default_rng(73)
        for i in range(40):
            dem = random_raster(rng, nodata_frac=0.15 if i % 4 == 0 else 0.0)
            conn = Connectivity.EIGHT if i % 2 else Connectivity.FOUR
            _, filled = priority_flood_watersheds(dem, conn, also_fill=True)
            expected, _ = improved_priority_flood(dem, conn)
            assert filled == expected, f"raster {i}"

    def test_off_by_default(self):
        dem = single_pit_raster()
        labels, filled = priority_flood_watersheds(dem)
        assert filled is None


class TestBoundaries:
    def test_uniform_field_has_no_boundary(self):
        l = LabelField(labels=np.ones((4, 4), dtype=np.int64), n_watersheds=1)
        assert not watershed_boundaries(l).any()

    def test_vertical_split_marks_lower_side(self):
        labels = np.ones((4, 4), dtype=np.int64)
        labels[:, 2:] = 2
        l = LabelField(labels=labels, n_watersheds=2)
        mask = watershed_boundaries(l)
        expected = np.zeros((4, 4), dtype=bool)
        expected[:, 1] = True  # the label-1 column along the interface
        assert np.array_equal(mask, expected)

    def test_nodata_does_not_create_boundary(self):
        labels = np.ones((3, 3), dtype=np.int64)
        labels[1, 1] = NODATA_LABEL
        l = LabelField(labels=labels, n_watersheds=1)
        assert not watershed_boundaries(l).any()

    def test_unfinalized_rejected(self):
        labels = np.ones((2, 2), dtype=np.int64)
        labels[0, 0] = 0  # still a candidate
        with pytest.raises(UnfinalizedLabelsError):
            watershed_boundaries(LabelField(labels=labels, n_watersheds=1))

    def test_mask_invariant_under_permutation_and_canonicalization(self):
        rng = np.random.default_rng(74)
        for _ in range(20):
            dem = random_raster(rng, 14, 14)
            field, _ = priority_flood_watersheds(dem)
            k = field.n_watersheds
            perm = rng.permutation(k) + 1
            permuted = np.where(
                field.labels > 0, perm[np.maximum(field.labels, 1) - 1], field.labels
            )
            pf = LabelField(labels=permuted, n_watersheds=k)
            a = canonical_labels(field)
            b = canonical_labels(pf)
            assert np.array_equal(watershed_boundaries(a), watershed_boundaries(b))
            assert watershed_boundaries(a).sum() == watershed_boundaries(b).sum()


class TestCanonicalLabels:
    def test_first_occurrence_numbering(self):
        labels = np.array([[7, 7, 3], [7, 3, 3]], dtype=np.int64)
        canon = canonical_labels(LabelField(labels=labels, n_watersheds=2))
        assert canon.labels.tolist() == [[1, 1, 2], [1, 2, 2]]

    def test_permutation_invariance(self):
        rng = np.random.default_rng(75)
        dem = random_raster(rng, 12, 12)
        field, _ = priority_flood_watersheds(dem)
        k = field.n_watersheds
        perm = rng.permutation(k) + 1
        permuted = np.where(field.labels > 0, perm[field.labels - 1], field.labels)
        assert canonical_labels(field) == canonical_labels(
            LabelField(labels=permuted, n_watersheds=k)
        )


class TestFlowPathCrossValidation:
    """Cells whose flow paths exit at a common edge cell must share that
    outlet's watershed label. Flow directions are computed on the filled
    surface of the same DEM; continuous terrain keeps elevations tie-free,
    where this equivalence is exact."""

    @pytest.mark.parametrize("kind", ["noise", "pits", "nested"])
    def test_trace_groups_refine_labels(self, kind):
        for seed in range(8):
            dem = synth_dem(kind, 14, 14, seed)
            labels, filled = priority_flood_watersheds(dem, also_fill=True)
            flow = priority_flood_flowdirs(filled)
            for r in range(dem.nrows):
                for c in range(dem.ncols):
                    path = trace_path(flow, CellIndex(r, c))
                    exit_cell = path[-1]
                    assert (
                        labels.labels[r, c]
                        == labels.labels[exit_cell.row, exit_cell.col]
                    ), f"{kind}/{seed}: cell ({r},{c}) exits at {exit_cell}"
