"""Tests for the RSSI forward model, thresholds, filtering and logs."""

import math

import numpy as np
import pytest

from kvis_mapping.config import RssiModelParams
from kvis_mapping.exceptions import (
    ConfigError,
    DegenerateInputError,
    DomainError,
    LoadError,
    ThresholdError,
)
from kvis_mapping.grid.floorplan import Floorplan
from kvis_mapping.models import TrajectoryPattern
from kvis_mapping.raycast import count_wall_crossings, crossing_counter
from kvis_mapping.rssi import (
    RssiLog,
    RssiThresholds,
    classify_k,
    classify_many,
    filter_readings,
    fit_thresholds,
    kmeans_1d,
    path_loss,
    read_rssi_log,
    read_thresholds,
    simulate_readings,
    simulate_rssi,
    sliding_filter,
    write_rssi_log,
    write_thresholds,
)
from kvis_mapping.simulation import generate_trajectory, room_row

from .helpers import optimal_kmeans_1d


def three_room_plan() -> Floorplan:
    """Three closed 20x20 rooms in a row, router at the center of the first."""
    return Floorplan(walls=room_row(3, 20, 20), resolution=0.1, routers=((10, 10),))


class TestPathLoss:
    """Test the log-distance model."""

    def test_reference_distance(self, noiseless_params):
        """Test RSSI at d0 equals p0."""
        assert path_loss(1.0, 0, noiseless_params) == pytest.approx(-40.0)

    def test_decade(self, noiseless_params):
        """Test one decade of distance costs 10 * n dB."""
        assert path_loss(10.0, 0, noiseless_params) == pytest.approx(-62.0)

    def test_walls(self, noiseless_params):
        """Test each wall subtracts the attenuation."""
        assert path_loss(10.0, 2, noiseless_params) == pytest.approx(-78.0)

    def test_clamped_below_reference(self, noiseless_params):
        """Test distances below d0 read as d0."""
        assert path_loss(0.0, 0, noiseless_params) == pytest.approx(-40.0)
        assert path_loss(0.3, 1, noiseless_params) == pytest.approx(-48.0)


class TestSimulation:
    """Test simulated readings."""

    def test_single_reading(self, single_wall_plan, noiseless_params, rng):
        """Test a reading behind one wall."""
        router = single_wall_plan.routers[0]
        rssi = simulate_rssi(single_wall_plan, router, (15, 5), noiseless_params, rng)
        assert rssi == pytest.approx(path_loss(1.0, 1, noiseless_params))

    def test_matrix_shape_and_values(self, single_wall_plan, noiseless_params, rng):
        """Test one column per router."""
        plan = single_wall_plan.with_routers([(5, 5), (15, 5)])
        poses = [(2, 2), (12, 8)]
        readings = simulate_readings(plan, poses, noiseless_params, rng)
        assert readings.shape == (2, 2)
        for i, pose in enumerate(poses):
            for j, router in enumerate(plan.routers):
                assert readings[i, j] == pytest.approx(
                    simulate_rssi(plan, router, pose, noiseless_params, rng)
                )

    def test_noise_is_seeded(self, single_wall_plan):
        """Test equal seeds give equal noisy readings."""
        params = RssiModelParams(noise_sigma=2.0)
        poses = [(2, 2), (3, 3), (12, 8)]
        a = simulate_readings(single_wall_plan, poses, params, np.random.default_rng(5))
        b = simulate_readings(single_wall_plan, poses, params, np.random.default_rng(5))
        c = simulate_readings(single_wall_plan, poses, params, np.random.default_rng(6))
        assert np.array_equal(a, b)
        assert not np.array_equal(a, c)

    def test_pose_on_wall(self, single_wall_plan, noiseless_params, rng):
        """Test poses must be free cells."""
        with pytest.raises(DomainError, match="pose 1"):
            simulate_readings(single_wall_plan, [(2, 2), (10, 4)], noiseless_params, rng)


class TestKMeans:
    """Test 1-D k-means."""

    def test_three_gaussians(self, rng):
        """Test centroids of three separated clusters against the exact optimum."""
        samples = np.concatenate(
            [rng.normal(-40, 1, 100), rng.normal(-55, 1, 100), rng.normal(-70, 1, 100)]
        )
        centroids = kmeans_1d(samples, 3, seed=0)
        assert centroids == pytest.approx([-40, -55, -70], abs=0.5)
        assert centroids == pytest.approx(optimal_kmeans_1d(samples, 3), rel=1e-9)

    def test_centroids_descending(self, rng):
        """Test output order."""
        samples = rng.uniform(-90, -30, 200)
        centroids = kmeans_1d(samples, 4, seed=1)
        assert centroids == sorted(centroids, reverse=True)
        assert len(set(centroids)) == 4

    def test_seeded(self, rng):
        """Test the seed fixes the result."""
        samples = rng.uniform(-90, -30, 200)
        assert kmeans_1d(samples, 3, seed=9) == kmeans_1d(samples, 3, seed=9)

    def test_too_few_samples(self):
        """Test fewer samples than clusters."""
        with pytest.raises(DomainError):
            kmeans_1d([-40.0, -50.0], 3, seed=0)
        with pytest.raises(DomainError):
            kmeans_1d([-40.0], 0, seed=0)

    def test_degenerate(self):
        """Test too few distinct values."""
        with pytest.raises(DegenerateInputError):
            kmeans_1d([-40.0, -40.0, -40.0, -50.0], 3, seed=0)


class TestThresholds:
    """Test RSSI bounds and classification."""

    def test_from_centroids(self):
        """Test bounds are centroid midpoints."""
        th = RssiThresholds.from_centroids([-40.0, -55.0, -70.0])
        assert th.bounds == (-47.5, -62.5)
        assert th.k_max == 2

    def test_fit(self, rng):
        """Test fitting K bounds from K + 1 clusters."""
        samples = np.concatenate([rng.normal(-45, 0.5, 50), rng.normal(-65, 0.5, 50)])
        th = fit_thresholds(samples, k_max=1, seed=0)
        assert th.k_max == 1
        assert -57 < th.bounds[0] < -53

    def test_must_decrease(self):
        """Test non-decreasing bounds."""
        with pytest.raises(ThresholdError):
            RssiThresholds.explicit([-60.0, -50.0])
        with pytest.raises(ThresholdError):
            RssiThresholds.explicit([-50.0, -50.0])
        with pytest.raises(ThresholdError):
            RssiThresholds.from_centroids([-50.0, -50.0])

    @pytest.mark.parametrize(
        "rssi,expected",
        [(-30.0, 0), (-47.4, 0), (-47.5, 1), (-50.0, 1), (-62.5, 2), (-90.0, 2)],
    )
    def test_classify_k(self, rssi, expected):
        """Test the band lookup, bounds belonging to the weaker band."""
        th = RssiThresholds.explicit([-47.5, -62.5])
        assert classify_k(rssi, th) == expected

    def test_classify_monotone(self, rng):
        """Test stronger readings never see more walls."""
        th = RssiThresholds.explicit([-45.0, -55.0, -65.0])
        values = np.sort(rng.uniform(-90, -30, 500))
        ks = [classify_k(v, th) for v in values]
        assert all(a >= b for a, b in zip(ks, ks[1:]))

    def test_classify_many(self):
        """Test vectorized classification with missing readings."""
        th = RssiThresholds.explicit([-47.5, -62.5])
        ks = classify_many([-40.0, math.nan, -50.0, -70.0], th)
        assert ks.tolist() == [0, -1, 1, 2]

    def test_json_round_trip(self, tmp_path):
        """Test threshold files."""
        sets = [
            RssiThresholds.from_centroids([-40.0, -55.0]),
            RssiThresholds.explicit([-48.0]),
        ]
        path = write_thresholds(sets, tmp_path / "thresholds.json")
        assert read_thresholds(path) == sets

    def test_read_invalid(self, tmp_path):
        """Test malformed threshold files."""
        path = tmp_path / "bad.json"
        path.write_text('[{"bounds": [-60.0, -50.0]}]')
        with pytest.raises(LoadError):
            read_thresholds(path)
        with pytest.raises(LoadError):
            read_thresholds(tmp_path / "absent.json")


class TestFilter:
    """Test the sliding median filter."""

    def test_median_with_truncated_edges(self):
        """Test window 3 on a series with a spike."""
        out = sliding_filter([1.0, 100.0, 3.0, 4.0, 5.0], 3)
        assert out.tolist() == [50.5, 3.0, 4.0, 4.0, 4.5]

    def test_window_one_is_identity(self):
        """Test window 1."""
        assert sliding_filter([3.0, 1.0, 2.0], 1).tolist() == [3.0, 1.0, 2.0]

    @pytest.mark.parametrize("window", [0, 2, 4])
    def test_invalid_window(self, window):
        """Test even or non-positive windows."""
        with pytest.raises(ConfigError):
            sliding_filter([1.0, 2.0, 3.0], window)

    def test_missing_readings_stay_missing(self):
        """Test NaN handling."""
        out = sliding_filter([1.0, math.nan, 3.0, 5.0], 3)
        assert out[0] == 1.0
        assert math.isnan(out[1])
        assert out[2] == 4.0
        assert out[3] == 4.0

    def test_filter_readings(self):
        """Test column-wise filtering."""
        readings = np.array([[1.0, 10.0], [9.0, 20.0], [2.0, 30.0]])
        out = filter_readings(readings, 3)
        assert out.shape == (3, 2)
        assert out[:, 1].tolist() == [15.0, 20.0, 25.0]
        with pytest.raises(DomainError):
            filter_readings(np.zeros(3), 3)


class TestRssiLog:
    """Test RSSI log CSV files."""

    def test_round_trip(self, tmp_path):
        """Test times, positions and readings survive, missing readings included."""
        log = RssiLog(
            times=[0.0, 0.5],
            points=[[0.15, 0.25], [0.35, 0.45]],
            rssi=[[-40.0, math.nan], [-55.5, -60.25]],
        )
        path = write_rssi_log(log, tmp_path / "log.csv")
        assert path.read_text().splitlines()[0] == "t,x,y,rssi_0,rssi_1"
        loaded = read_rssi_log(path)
        assert loaded.n_routers == 2
        assert np.array_equal(loaded.times, log.times)
        assert np.allclose(loaded.points, log.points)
        assert np.array_equal(np.isnan(loaded.rssi), np.isnan(log.rssi))
        assert loaded.rssi[1, 1] == -60.25

    def test_row_mismatch(self):
        """Test inconsistent columns."""
        with pytest.raises(DomainError):
            RssiLog(times=[0.0, 1.0], points=[[0.0, 0.0]], rssi=[[-40.0], [-41.0]])

    def test_bad_header(self, tmp_path):
        """Test an unexpected header."""
        path = tmp_path / "log.csv"
        path.write_text("time,x,y,rssi_0\n0,0,0,-40\n")
        with pytest.raises(LoadError, match="header"):
            read_rssi_log(path)

    def test_bad_field(self, tmp_path):
        """Test a malformed value names its line."""
        path = tmp_path / "log.csv"
        path.write_text("t,x,y,rssi_0\n0,0,0,-40\n1,0,abc,-41\n")
        with pytest.raises(LoadError, match="line 3"):
            read_rssi_log(path)


class TestClassificationRoundTrip:
    """Test simulated readings classify back to the true k."""

    def test_single_wall_noiseless(self, single_wall_plan, noiseless_params, rng):
        """Test every free cell of the single-wall plan."""
        poses = list(single_wall_plan.free_cells())
        readings = simulate_readings(single_wall_plan, poses, noiseless_params, rng)[:, 0]
        th = fit_thresholds(readings, k_max=1, seed=0)
        router = single_wall_plan.routers[0]
        for pose, rssi in zip(poses, readings):
            assert classify_k(rssi, th) == count_wall_crossings(single_wall_plan, router, pose)

    @pytest.mark.integration
    def test_three_rooms_noiseless(self, noiseless_params, rng):
        """Test k in {0, 1, 2} along a rooms trajectory is recovered exactly."""
        plan = three_room_plan()
        poses = generate_trajectory(plan, TrajectoryPattern.ROOMS, seed=3)
        readings = filter_readings(
            simulate_readings(plan, poses, noiseless_params, rng), window=5
        )[:, 0]
        th = fit_thresholds(readings, k_max=2, seed=3)
        count = crossing_counter(plan)
        truth = [count(plan.routers[0], p) for p in poses]
        assert set(truth) == {0, 1, 2}
        assert classify_many(readings, th).tolist() == truth

    @pytest.mark.integration
    def test_three_rooms_noisy(self):
        """Test 2 dB noise with a window-5 median filter keeps recovery at 90% or more."""
        plan = three_room_plan()
        poses = generate_trajectory(plan, TrajectoryPattern.ROOMS, seed=3)
        params = RssiModelParams(noise_sigma=2.0)
        raw = simulate_readings(plan, poses, params, np.random.default_rng(2024))
        readings = filter_readings(raw, window=5)[:, 0]
        th = fit_thresholds(readings, k_max=2, seed=3)
        count = crossing_counter(plan)
        truth = np.array([count(plan.routers[0], p) for p in poses])
        recovered = np.mean(classify_many(readings, th) == truth)
        assert recovered >= 0.9
