"""Sparse inverse k-visibility mapper for one or more routers.

Each trajectory sample is processed in order:

* the pose itself is free space;
* the router with the strongest reading is focused;
* with k = 0 the whole ray from that router to the pose is free space;
* with k >= 1 the ray is tightened to on-ray trajectory cells, split at
  every trajectory crossing, and each part gets free evidence (equal k at
  both ends) or wall evidence spread over its cells (k grows by delta k).

After the last sample the outline of the bounding box around all touched
cells is stamped as wall wherever the map is still unknown.
"""

import logging
from dataclasses import dataclass, field
from typing import Dict, List, Sequence, Set, Tuple, Union

import numpy as np

from ..config import MapperConfig
from ..exceptions import ConfigError, DomainError
from ..grid.floorplan import UNKNOWN, BeliefMap, Floorplan, bounding_box
from ..models import CellIndex
from ..raycast.traversal import RayPath, traverse
from ..rssi.thresholds import RssiThresholds
from .evidence import fuse_arrays, wall_probability
from .rays import RefinedRay, Subsegment, refine_endpoints, subsegment_deltas
from .trajectory import (
    NO_K,
    Trajectory,
    TrajectorySample,
    intersection_lookup,
    select_focused_router,
)

logger = logging.getLogger(__name__)


@dataclass
class MappingTrace:
    """What the mapper did, for auditing a run."""

    free_ray_cells: Set[CellIndex] = field(default_factory=set)
    rays_per_router: List[int] = field(default_factory=list)
    skipped_samples: int = 0
    subsegments: int = 0
    inconsistent_subsegments: int = 0
    outline_cells: int = 0

    def free_ray_wall_hits(self, plan: Floorplan) -> int:
        """Number of k = 0 ray cells that are walls of a ground-truth plan."""
        return sum(1 for c in self.free_ray_cells if plan.in_bounds(c) and plan.is_wall(c))


@dataclass
class MappingResult:
    belief: BeliefMap
    trace: MappingTrace


class SparseMapper:
    """Accumulates free and wall evidence from a classified trajectory into a BeliefMap."""

    def __init__(
        self,
        width: int,
        height: int,
        routers: Sequence[Sequence[int]],
        cfg: MapperConfig,
    ):
        """Initialize the mapper.

        Args:
            width: Grid width in cells
            height: Grid height in cells
            routers: Router cells, indexed like the trajectory readings
            cfg: Mapper configuration

        Raises:
            ConfigError: If there is no router or one lies outside the grid
        """
        if not routers:
            raise ConfigError("at least one router is required")
        self.routers = [CellIndex(int(r[0]), int(r[1])) for r in routers]
        for i, r in enumerate(self.routers):
            if not (0 <= r.x < width and 0 <= r.y < height):
                raise ConfigError(f"router {i} at {tuple(r)} is outside the {width}x{height} grid")
        self.width = width
        self.height = height
        self.cfg = cfg
        self.belief = BeliefMap.unknown(width, height)
        self.trace = MappingTrace(rays_per_router=[0] * len(self.routers))
        self._touched = np.zeros((height, width), dtype=bool)

    # ------------------------------------------------------------------
    # Evidence
    # ------------------------------------------------------------------

    def _prior_variance(self, ys: np.ndarray, xs: np.ndarray) -> np.ndarray:
        var = self.belief.variance[ys, xs]
        return np.where(np.isnan(var), self.cfg.base_variance, var)

    def _index(self, cells: Sequence[CellIndex]) -> Tuple[np.ndarray, np.ndarray]:
        xs = np.fromiter((c.x for c in cells), dtype=np.intp, count=len(cells))
        ys = np.fromiter((c.y for c in cells), dtype=np.intp, count=len(cells))
        return ys, xs

    def observe_free(self, cells: Sequence[CellIndex]) -> None:
        """Pull each cell toward free by one sigma step."""
        if not cells:
            return
        unique = list(dict.fromkeys(cells))
        ys, xs = self._index(unique)
        prob = self.belief.prob_free[ys, xs]
        target = np.minimum(1.0, prob + self.cfg.sigma_step)
        obs_var = np.full(prob.shape, self.cfg.base_variance)
        mu, var = fuse_arrays(prob, self._prior_variance(ys, xs), target, obs_var)
        self.belief.prob_free[ys, xs] = np.clip(mu, 0.0, 1.0)
        self.belief.variance[ys, xs] = var
        self._touched[ys, xs] = True

    def observe_subsegment(self, sub: Subsegment) -> None:
        """Apply free or wall evidence for one subsegment."""
        self.trace.subsegments += 1
        if sub.delta_k < 0:
            self.trace.inconsistent_subsegments += 1
            logger.debug(f"skipping subsegment {sub.start}->{sub.end} with delta_k {sub.delta_k}")
            return
        inner = list(sub.intermediate_cells)
        if sub.delta_k == 0:
            self.observe_free(inner)
            return
        evidence = wall_probability(sub, self.cfg)
        if evidence.mu.size == 0:
            return
        ys, xs = self._index(inner)
        prob = self.belief.prob_free[ys, xs]
        obs_var = np.full(prob.shape, evidence.variance)
        mu, var = fuse_arrays(prob, self._prior_variance(ys, xs), 1.0 - evidence.mu, obs_var)
        self.belief.prob_free[ys, xs] = np.clip(mu, 0.0, 1.0)
        self.belief.variance[ys, xs] = var
        self._touched[ys, xs] = True

    def _observe_k0_ray(self, path: Sequence[CellIndex]) -> None:
        cells = list(path)
        self.trace.free_ray_cells.update(cells)
        self.observe_free(cells)

    # ------------------------------------------------------------------
    # Samples
    # ------------------------------------------------------------------

    def process(self, sample: TrajectorySample, lookups: Sequence[Dict[CellIndex, int]]) -> None:
        """Apply every rule for one sample.

        Args:
            sample: Classified trajectory sample
            lookups: Per-router map from trajectory cell to k
        """
        pose = sample.pose
        if not (0 <= pose.x < self.width and 0 <= pose.y < self.height):
            raise DomainError(f"pose {tuple(pose)} is outside the grid")
        self.observe_free([pose])

        j = select_focused_router(sample)
        if j is None or j >= len(sample.k) or sample.k[j] == NO_K:
            self.trace.skipped_samples += 1
            return
        k = sample.k[j]
        router = self.routers[j]
        path = traverse(router, pose)
        self.trace.rays_per_router[j] += 1

        if k == 0:
            self._observe_k0_ray(path)
            return
        if len(path) < 2:
            return

        lookup = lookups[j]
        if self.cfg.refine_endpoints:
            ray = refine_endpoints(router, pose, k, lookup, path=path)
        else:
            ray = RefinedRay(lower=router, upper=pose, k_lower=0, k_upper=k, cells=path)

        if ray.lower != router:
            self._observe_k0_ray(traverse(router, ray.lower))
        subsegments = subsegment_deltas(ray, lookup)
        if ray.upper != pose:
            upper_at = path.cells.index(ray.upper)
            tail = RefinedRay(
                lower=ray.upper,
                upper=pose,
                k_lower=ray.k_upper,
                k_upper=k,
                cells=RayPath(path[upper_at:]),
            )
            subsegments.extend(subsegment_deltas(tail, lookup))
        for sub in subsegments:
            self.observe_subsegment(sub)

    def finalize(self, traj: Trajectory) -> None:
        """Keep trajectory cells free and stamp the bounding-box outline."""
        floor = UNKNOWN + self.cfg.sigma_step
        for sample in traj:
            p = sample.pose
            if self.belief.prob_free[p.y, p.x] < floor:
                self.belief.prob_free[p.y, p.x] = floor

        ys, xs = np.nonzero(self._touched)
        if ys.size == 0:
            return
        box = bounding_box(zip(xs.tolist(), ys.tolist()))
        x0, y0 = max(box.min.x - 1, 0), max(box.min.y - 1, 0)
        x1, y1 = min(box.max.x + 1, self.width - 1), min(box.max.y + 1, self.height - 1)
        outline = np.zeros(self.belief.shape, dtype=bool)
        outline[y0, x0 : x1 + 1] = True
        outline[y1, x0 : x1 + 1] = True
        outline[y0 : y1 + 1, x0] = True
        outline[y0 : y1 + 1, x1] = True
        stamp = outline & (self.belief.prob_free == UNKNOWN)
        self.belief.prob_free[stamp] = 0.0
        self.belief.variance[stamp] = self.cfg.base_variance
        self.trace.outline_cells = int(stamp.sum())

    def run(self, traj: Trajectory) -> MappingResult:
        """Process a whole trajectory in order and finalize the map."""
        lookups = [
            intersection_lookup(traj, j, self.cfg.step_bound, self.cfg.min_run_length)
            for j in range(len(self.routers))
        ]
        for sample in traj:
            self.process(sample, lookups)
        self.finalize(traj)
        logger.info(
            f"Mapped {len(traj)} samples: rays per router {self.trace.rays_per_router}, "
            f"{self.trace.subsegments} subsegments, {self.trace.skipped_samples} skipped, "
            f"{self.trace.outline_cells} outline cells stamped"
        )
        return MappingResult(belief=self.belief, trace=self.trace)


def run_mapper(
    traj: Trajectory,
    routers: Sequence[Sequence[int]],
    th: Union[RssiThresholds, Sequence[RssiThresholds], None],
    cfg: MapperConfig,
    width: int,
    height: int,
) -> BeliefMap:
    """Build a belief map from a classified trajectory.

    Args:
        traj: Trajectory with k-values for every router that has readings
        routers: Router cells
        th: Thresholds used for classification; they supply k_max when the
            config leaves it unset
        cfg: Mapper configuration
        width: Grid width in cells
        height: Grid height in cells

    Returns:
        BeliefMap; all unknown for an empty trajectory

    Raises:
        ConfigError: If a router lies outside the grid
    """
    if cfg.k_max is None and th is not None:
        sets = [th] if isinstance(th, RssiThresholds) else list(th)
        if sets:
            cfg = cfg.model_copy(update={"k_max": max(t.k_max for t in sets)})
    return SparseMapper(width, height, routers, cfg).run(traj).belief
