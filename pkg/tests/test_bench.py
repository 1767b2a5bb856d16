"""Benchmark harness: record schema, calibration, and the flat-terrain case."""

import pytest

from floodfill import improved_priority_flood, priority_flood, synth_dem
from floodfill.bench import (
    CSV_HEADER,
    bench_suite,
    dem_with_depression_fraction,
    depression_fraction,
    speedup_series,
    time_op,
    write_csv,
)


class TestCalibration:
    def test_targets_reached_within_tolerance(self):
        for target in (5.0, 30.0, 60.0):
            dem, pct = dem_with_depression_fraction(target, 96, 96, seed=17)
            assert abs(pct - target) <= 6.0, (target, pct)
            assert abs(depression_fraction(dem) - pct) < 1e-9

    def test_zero_target_gives_slope(self):
        dem, pct = dem_with_depression_fraction(0.0, 64, 64, seed=1)
        assert pct == 0.0


class TestBenchSuite:
    def test_records_and_csv_schema(self, tmp_path):
        records = bench_suite([64], [10.0], repeats=3, include_baseline=True)
        assert records
        algorithms = {r.algorithm for r in records}
        assert algorithms == {
            "priority_flood", "improved_priority_flood", "planchon_darboux_fill",
        }
        for r in records:
            assert r.wall_s > 0
            assert 0.0 <= r.pct_depression <= 100.0
            assert r.cells == 64 * 64
        path = tmp_path / "b.csv"
        write_csv(records, path)
        lines = path.read_text().splitlines()
        assert lines[0] == "algorithm,raster_id,cells,pct_depression,backend,wall_s"
        assert lines[0] == ",".join(CSV_HEADER)
        assert len(lines) == len(records) + 1

    def test_speedup_series_pairs_by_raster(self):
        records = bench_suite([64], [5.0, 50.0], repeats=3, include_baseline=False)
        series = speedup_series(records)
        assert len(series) == 2
        assert series[0][0] <= series[1][0]

    def test_preconditions(self):
        with pytest.raises(ValueError):
            bench_suite([32], [5.0])
        with pytest.raises(ValueError):
            bench_suite([64], [5.0], repeats=2)


class TestFlatTerrain:
    def test_slope_speedup_is_noise_level(self):
        # with zero depressions the pit queue sees no traffic, so the two
        # variants do identical heap work
        dem = synth_dem("slope", 256, 256, seed=0)
        t_orig = time_op(lambda: priority_flood(dem), repeats=7, stat="min")
        t_impr = time_op(lambda: improved_priority_flood(dem), repeats=7, stat="min")
        speedup = 100.0 * (t_orig - t_impr) / t_orig
        assert abs(speedup) < 15.0, f"expected near-zero speedup, got {speedup:.1f}%"
