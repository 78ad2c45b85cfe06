"""Robot trajectories: samples, classification, segmentation and focused routers."""

import logging
import math
from dataclasses import dataclass, replace
from typing import Dict, Iterator, List, Optional, Sequence, Tuple

import numpy as np

from ..exceptions import DomainError
from ..grid.floorplan import Floorplan, cell_to_world, world_to_cell
from ..models import CellIndex, WorldPoint
from ..rssi.logs import RssiLog
from ..rssi.thresholds import RssiThresholds, classify_many

logger = logging.getLogger(__name__)

NO_K = -1


@dataclass(frozen=True)
class TrajectorySample:
    """One pose with its per-router readings (NaN = missing) and k-values (-1 = unknown)."""

    time: float
    pose: CellIndex
    rssi: Tuple[float, ...] = ()
    k: Tuple[int, ...] = ()


@dataclass(frozen=True)
class TrajectoryRun:
    """Maximal run of consecutive samples sharing one k-value for one router.

    ``start`` and ``stop`` are sample indices, ``stop`` exclusive.
    """

    router: int
    k: int
    start: int
    stop: int

    def __len__(self) -> int:
        return self.stop - self.start


class Trajectory:
    """Ordered, timestamped sample sequence with non-decreasing times."""

    def __init__(self, samples: Sequence[TrajectorySample]):
        self._samples: Tuple[TrajectorySample, ...] = tuple(samples)
        for i in range(1, len(self._samples)):
            if self._samples[i].time < self._samples[i - 1].time:
                raise DomainError(
                    f"sample {i} at t={self._samples[i].time} precedes "
                    f"t={self._samples[i - 1].time}"
                )

    @classmethod
    def from_poses(
        cls, poses: Sequence[Sequence[int]], sample_period: float = 1.0
    ) -> "Trajectory":
        """Build a reading-free trajectory sampled every ``sample_period`` seconds."""
        return cls(
            [
                TrajectorySample(time=i * sample_period, pose=CellIndex(int(p[0]), int(p[1])))
                for i, p in enumerate(poses)
            ]
        )

    @classmethod
    def from_log(cls, log: RssiLog, plan: Floorplan) -> "Trajectory":
        """Convert an RSSI log to cell poses on a plan.

        Raises:
            GridBoundsError: If a logged position lies outside the plan
        """
        samples = []
        for i in range(len(log)):
            point = WorldPoint(float(log.points[i, 0]), float(log.points[i, 1]))
            samples.append(
                TrajectorySample(
                    time=float(log.times[i]),
                    pose=world_to_cell(point, plan),
                    rssi=tuple(float(v) for v in log.rssi[i]),
                    k=tuple(NO_K for _ in range(log.n_routers)),
                )
            )
        return cls(samples)

    def to_log(self, plan: Floorplan) -> RssiLog:
        """Metric log of this trajectory (cell centers)."""
        n_routers = max((len(s.rssi) for s in self._samples), default=len(plan.routers))
        rssi = np.full((len(self._samples), n_routers), np.nan)
        for i, s in enumerate(self._samples):
            rssi[i, : len(s.rssi)] = s.rssi
        return RssiLog(
            times=np.array([s.time for s in self._samples], dtype=np.float64),
            points=np.array([cell_to_world(s.pose, plan) for s in self._samples]).reshape(-1, 2),
            rssi=rssi,
        )

    def __len__(self) -> int:
        return len(self._samples)

    def __iter__(self) -> Iterator[TrajectorySample]:
        return iter(self._samples)

    def __getitem__(self, index: int) -> TrajectorySample:
        return self._samples[index]

    @property
    def samples(self) -> Tuple[TrajectorySample, ...]:
        return self._samples

    @property
    def poses(self) -> List[CellIndex]:
        return [s.pose for s in self._samples]

    def rssi_matrix(self) -> np.ndarray:
        """Readings as an (n_samples, n_routers) array."""
        if not self._samples:
            return np.empty((0, 0))
        return np.array([s.rssi for s in self._samples], dtype=np.float64)

    def with_rssi(self, readings: np.ndarray) -> "Trajectory":
        """Attach a reading matrix; k-values are reset to unknown."""
        readings = np.asarray(readings, dtype=np.float64)
        if readings.ndim != 2 or readings.shape[0] != len(self._samples):
            raise DomainError(
                f"reading matrix {readings.shape} does not match {len(self._samples)} samples"
            )
        unknown = tuple(NO_K for _ in range(readings.shape[1]))
        return Trajectory(
            [
                replace(s, rssi=tuple(float(v) for v in row), k=unknown)
                for s, row in zip(self._samples, readings)
            ]
        )

    def classify(self, thresholds: Sequence[RssiThresholds]) -> "Trajectory":
        """Fill k-values from readings, one threshold set per router.

        Raises:
            DomainError: If the threshold count does not match the reading columns
        """
        readings = self.rssi_matrix()
        if len(self._samples) and readings.shape[1] != len(thresholds):
            raise DomainError(
                f"{len(thresholds)} threshold sets for {readings.shape[1]} routers"
            )
        ks = [classify_many(readings[:, j], th) for j, th in enumerate(thresholds)]
        return Trajectory(
            [
                replace(s, k=tuple(int(col[i]) for col in ks))
                for i, s in enumerate(self._samples)
            ]
        )


def _chebyshev(a: Sequence[int], b: Sequence[int]) -> int:
    return max(abs(a[0] - b[0]), abs(a[1] - b[1]))


def segment_trajectory(
    traj: Trajectory, router: int, step_bound: int = 2
) -> List[TrajectoryRun]:
    """Split a trajectory into maximal runs of equal k for one router.

    A run breaks where k changes or where consecutive poses are more than
    ``step_bound`` cells apart (Chebyshev). Samples without a k-value for the
    router break runs and belong to none.

    Raises:
        DomainError: If a sample has no k entry for the router
    """
    runs: List[TrajectoryRun] = []
    start: Optional[int] = None
    for i, sample in enumerate(traj):
        if router >= len(sample.k):
            raise DomainError(f"sample {i} has no k-value for router {router}")
        k = sample.k[router]
        if start is not None:
            prev = traj[i - 1]
            if k != prev.k[router] or _chebyshev(sample.pose, prev.pose) > step_bound:
                runs.append(TrajectoryRun(router, prev.k[router], start, i))
                start = None
        if start is None and k != NO_K:
            start = i
    if start is not None:
        runs.append(TrajectoryRun(router, traj[len(traj) - 1].k[router], start, len(traj)))
    return runs


def select_focused_router(
    sample: TrajectorySample, routers: Optional[Sequence[int]] = None
) -> Optional[int]:
    """Index of the strongest reading at a sample; ties go to the lowest index.

    Args:
        sample: Trajectory sample
        routers: Candidate router indices (default: all)

    Returns:
        Router index, or None when no candidate has a reading (skip the sample)
    """
    candidates = range(len(sample.rssi)) if routers is None else routers
    best: Optional[int] = None
    for j in candidates:
        value = sample.rssi[j]
        if math.isnan(value):
            continue
        if best is None or value > sample.rssi[best]:
            best = j
    return best


def intersection_lookup(
    traj: Trajectory, router: int, step_bound: int = 2, min_run_length: int = 1
) -> Dict[CellIndex, int]:
    """Map each trajectory cell to its k-value for one router.

    Only samples from runs of at least ``min_run_length`` contribute. A cell
    visited with different k-values takes the most frequent one, ties going
    to the smaller k.
    """
    votes: Dict[CellIndex, Dict[int, int]] = {}
    for run in segment_trajectory(traj, router, step_bound):
        if len(run) < min_run_length:
            continue
        for i in range(run.start, run.stop):
            cell_votes = votes.setdefault(traj[i].pose, {})
            cell_votes[run.k] = cell_votes.get(run.k, 0) + 1
    return {
        cell: min(counts, key=lambda k: (-counts[k], k)) for cell, counts in votes.items()
    }


def focused_k(traj: Trajectory) -> List[Tuple[Optional[int], int]]:
    """(focused router, its k) per sample; (None, -1) when a sample has no reading."""
    out: List[Tuple[Optional[int], int]] = []
    for sample in traj:
        j = select_focused_router(sample)
        out.append((j, sample.k[j] if j is not None and j < len(sample.k) else NO_K))
    return out

