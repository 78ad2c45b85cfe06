"""Test helpers and reference implementations for k-visibility tests."""

import math
from typing import Any, Dict, List, Optional, Sequence, Set, Tuple

import numpy as np

from kvis_mapping.grid.floorplan import Floorplan
from kvis_mapping.mapping.trajectory import Trajectory, TrajectorySample
from kvis_mapping.models import CellIndex
from kvis_mapping.simulation.scenes import random_plan


# ============================================================================
# Reference traversal
# ============================================================================

CELL_KEY = 1 << 20


def sampled_entries(a: Sequence[int], b: Sequence[int]) -> Dict[Tuple[int, int], int]:
    """Cells whose closed square contains a sample of the segment a -> b.

    Each cell maps to the index of the first sample it contains. Samples are
    spaced 1/(4 * lcm(nx, ny)) of the segment apart, so every boundary
    crossing (including exact corner crossings) lands on a sample and every
    open stretch between two crossings holds at least one sample. All
    arithmetic is integer, scaled by the sample count.
    """
    ax, ay = int(a[0]), int(a[1])
    dx, dy = int(b[0]) - ax, int(b[1]) - ay
    n = 4 * math.lcm(max(abs(dx), 1), max(abs(dy), 1))
    i = np.arange(n + 1, dtype=np.int64)
    bounds = []
    for start, delta in ((ax, dx), (ay, dy)):
        scaled = 2 * (start * n + delta * i)
        lo = -((n - scaled) // (2 * n))
        hi = (scaled + n) // (2 * n)
        bounds.append((lo, hi))
    (xlo, xhi), (ylo, yhi) = bounds
    xs = np.concatenate([xlo, xlo, xhi, xhi])
    ys = np.concatenate([ylo, yhi, ylo, yhi])
    ts = np.tile(i, 4)
    order = np.argsort(ts, kind="stable")
    keys = xs[order] * CELL_KEY + ys[order]
    unique, first = np.unique(keys, return_index=True)
    times = ts[order][first]
    return {
        (int(k // CELL_KEY), int(k % CELL_KEY)): int(t) for k, t in zip(unique, times)
    }


def sampled_cells(a: Sequence[int], b: Sequence[int]) -> Set[Tuple[int, int]]:
    """Cells whose closed square contains a sample of the segment a -> b."""
    return set(sampled_entries(a, b))


def sampled_walk(a: Sequence[int], b: Sequence[int]) -> List[Tuple[int, Tuple[int, int]]]:
    """(entry sample, cell) in the order the segment enters the cells.

    At an exact corner three cells are entered at once; they are ordered
    x-neighbour, y-neighbour, then diagonal.
    """
    ax, ay = int(a[0]), int(a[1])
    sx = 1 if int(b[0]) > ax else -1
    sy = 1 if int(b[1]) > ay else -1
    entries = sampled_entries(a, b)

    def key(c: Tuple[int, int]) -> Tuple[int, int, int]:
        return (entries[c], (c[1] - ay) * sy, (c[0] - ax) * sx)

    return [(entries[c], c) for c in sorted(entries, key=key)]


def ordered_sampled_cells(a: Sequence[int], b: Sequence[int]) -> List[Tuple[int, int]]:
    """sampled_cells in entry order."""
    return [cell for _, cell in sampled_walk(a, b)]


def reference_crossings(walls: np.ndarray, a: Sequence[int], b: Sequence[int]) -> int:
    """Wall runs along the sampled walk, endpoints excluded.

    The two side cells of a corner crossing are one step, a wall when either
    of them is.
    """
    walk = sampled_walk(a, b)
    steps: List[List[Tuple[int, int]]] = []
    i = 0
    while i < len(walk):
        if i + 2 < len(walk) and walk[i][0] == walk[i + 1][0] == walk[i + 2][0]:
            steps.append([walk[i][1], walk[i + 1][1]])
            i += 2
        else:
            steps.append([walk[i][1]])
            i += 1
    runs = 0
    previous = False
    for step in steps[1:-1]:
        flag = any(bool(walls[y, x]) for x, y in step)
        if flag and not previous:
            runs += 1
        previous = flag
    return runs


# ============================================================================
# Reference 1-D k-means
# ============================================================================


def optimal_kmeans_1d(samples: Sequence[float], clusters: int) -> List[float]:
    """Globally optimal 1-D k-means by dynamic programming; centroids descending."""
    x = np.sort(np.asarray(samples, dtype=np.float64))
    n = x.size
    s1 = np.concatenate([[0.0], np.cumsum(x)])
    s2 = np.concatenate([[0.0], np.cumsum(x * x)])

    def cost(i: int, j: int) -> float:
        # within-cluster sum of squares of x[i:j]
        m = j - i
        total = s1[j] - s1[i]
        return float(s2[j] - s2[i] - total * total / m)

    inf = float("inf")
    best = np.full((clusters + 1, n + 1), inf)
    split = np.zeros((clusters + 1, n + 1), dtype=np.int64)
    best[0, 0] = 0.0
    for k in range(1, clusters + 1):
        for j in range(k, n + 1):
            for i in range(k - 1, j):
                value = best[k - 1, i] + cost(i, j)
                if value < best[k, j]:
                    best[k, j] = value
                    split[k, j] = i
    centroids = []
    j = n
    for k in range(clusters, 0, -1):
        i = int(split[k, j])
        centroids.append(float(x[i:j].mean()))
        j = i
    return sorted(centroids, reverse=True)


# ============================================================================
# Data factories
# ============================================================================


class TestDataFactory:
    """Factory for plans, trajectories and experiment configs."""

    __test__ = False

    @staticmethod
    def plan_from_rows(
        rows: Sequence[str], resolution: float = 0.1, routers: Sequence[Sequence[int]] = ()
    ) -> Floorplan:
        """Build a plan from text rows: '#' is a wall, anything else free."""
        walls = np.array([[ch == "#" for ch in row] for row in rows], dtype=bool)
        return Floorplan(walls=walls, resolution=resolution, routers=tuple(routers))

    @staticmethod
    def wall_column_plan(
        width: int = 10, height: int = 10, columns: Sequence[int] = (5,), resolution: float = 0.1
    ) -> Floorplan:
        """Open plan with full-height wall columns and no outer walls."""
        walls = np.zeros((height, width), dtype=bool)
        for x in columns:
            walls[:, x] = True
        return Floorplan(walls=walls, resolution=resolution)

    @staticmethod
    def random_plans(
        count: int, width: int = 64, height: int = 64, seed: int = 0, density: float = 0.15
    ) -> List[Floorplan]:
        rng = np.random.default_rng(seed)
        return [
            Floorplan(walls=random_plan(width, height, rng, density), resolution=0.1)
            for _ in range(count)
        ]

    @staticmethod
    def trajectory(
        poses: Sequence[Sequence[int]],
        ks: Sequence[Sequence[int]],
        rssi: Optional[Sequence[Sequence[float]]] = None,
        sample_period: float = 1.0,
    ) -> Trajectory:
        """Classified trajectory; readings default to -50 dBm for every router."""
        samples = []
        for i, (pose, k) in enumerate(zip(poses, ks)):
            readings = tuple(rssi[i]) if rssi is not None else tuple(-50.0 for _ in k)
            samples.append(
                TrajectorySample(
                    time=i * sample_period,
                    pose=CellIndex(int(pose[0]), int(pose[1])),
                    rssi=tuple(float(v) for v in readings),
                    k=tuple(int(v) for v in k),
                )
            )
        return Trajectory(samples)

    @staticmethod
    def experiment(**overrides: Any) -> Dict[str, Any]:
        """Noiseless single-router empty-room experiment with explicit thresholds."""
        data: Dict[str, Any] = {
            "scene": {"kind": "empty_room", "width": 12, "height": 10},
            "resolution": 0.1,
            "routers": [[6, 5]],
            "trajectory": {"pattern": "perimeter"},
            "rssi": {"noise_sigma": 0.0},
            "thresholds": {"source": "explicit", "k_max": 1, "bounds": [-200.0]},
            "seed": 7,
        }
        data.update(overrides)
        return data


def free_pairs(
    plan: Floorplan, count: int, rng: np.random.Generator
) -> List[Tuple[CellIndex, CellIndex]]:
    """Random pairs of free cells."""
    free = list(plan.free_cells())
    picks = rng.integers(len(free), size=(count, 2))
    return [(free[i], free[j]) for i, j in picks.tolist()]
