"""Ground-truth floorplans, belief maps and coordinate transforms.

Grids are stored row-major with the origin at the top-left corner and y
increasing downward, so ``array[y, x]`` addresses cell ``CellIndex(x, y)``.
"""

import logging
import math
from dataclasses import dataclass, field
from typing import Iterable, Iterator, Sequence, Tuple

import numpy as np

from ..exceptions import DomainError, FloorplanError, GridBoundsError
from ..models import CellIndex, Rect, WorldPoint

logger = logging.getLogger(__name__)

UNKNOWN = 0.5


@dataclass(frozen=True, eq=False)
class Floorplan:
    """Binary wall grid with metric resolution and router positions.

    Attributes:
        walls: Boolean array of shape (height, width); True marks a wall cell
        resolution: Meters per cell
        routers: Router cells; each must be an in-bounds free cell
    """

    walls: np.ndarray
    resolution: float
    routers: Tuple[CellIndex, ...] = field(default=())

    def __post_init__(self) -> None:
        walls = np.array(self.walls, dtype=bool)
        if walls.ndim != 2 or walls.shape[0] < 1 or walls.shape[1] < 1:
            raise FloorplanError(f"floorplan must be a non-empty 2-D grid, got shape {walls.shape}")
        if not (self.resolution > 0 and math.isfinite(self.resolution)):
            raise FloorplanError(f"resolution must be positive, got {self.resolution}")
        walls.setflags(write=False)
        object.__setattr__(self, "walls", walls)

        routers = tuple(CellIndex(int(r[0]), int(r[1])) for r in self.routers)
        for i, router in enumerate(routers):
            if not self.in_bounds(router):
                raise FloorplanError(f"router {i} at {tuple(router)} is outside the grid")
            if self.is_wall(router):
                raise FloorplanError(f"router {i} at {tuple(router)} is on a wall cell")
        object.__setattr__(self, "routers", routers)

    @property
    def width(self) -> int:
        return int(self.walls.shape[1])

    @property
    def height(self) -> int:
        return int(self.walls.shape[0])

    @property
    def shape(self) -> Tuple[int, int]:
        """Array shape (height, width)."""
        return (self.height, self.width)

    def in_bounds(self, cell: Sequence[int]) -> bool:
        return 0 <= cell[0] < self.width and 0 <= cell[1] < self.height

    def is_wall(self, cell: Sequence[int]) -> bool:
        return bool(self.walls[cell[1], cell[0]])

    def free_cells(self) -> Iterator[CellIndex]:
        """Iterate free cells in row-major order."""
        ys, xs = np.nonzero(~self.walls)
        for x, y in zip(xs.tolist(), ys.tolist()):
            yield CellIndex(x, y)

    @property
    def free_area_m2(self) -> float:
        return float(np.count_nonzero(~self.walls)) * self.resolution**2

    def with_routers(self, routers: Iterable[Sequence[int]]) -> "Floorplan":
        """Return a copy of this plan with a different router set."""
        return Floorplan(
            walls=self.walls,
            resolution=self.resolution,
            routers=tuple(CellIndex(int(r[0]), int(r[1])) for r in routers),
        )


@dataclass(eq=False)
class BeliefMap:
    """Per-cell free-space probability with fusion variance.

    ``prob_free`` is exactly 0.5 for unknown cells; ``variance`` holds NaN
    until a cell receives its first observation.
    """

    prob_free: np.ndarray
    variance: np.ndarray

    def __post_init__(self) -> None:
        self.prob_free = np.asarray(self.prob_free, dtype=np.float64)
        self.variance = np.asarray(self.variance, dtype=np.float64)
        if self.prob_free.ndim != 2 or self.prob_free.shape != self.variance.shape:
            raise DomainError(
                f"prob_free {self.prob_free.shape} and variance {self.variance.shape} must be "
                "matching 2-D arrays"
            )
        if np.any((self.prob_free < 0) | (self.prob_free > 1)):
            raise DomainError("prob_free values must lie in [0, 1]")

    @classmethod
    def unknown(cls, width: int, height: int) -> "BeliefMap":
        """Create a map where every cell is unknown."""
        return cls(
            prob_free=np.full((height, width), UNKNOWN),
            variance=np.full((height, width), np.nan),
        )

    @classmethod
    def from_probabilities(cls, prob_free: np.ndarray) -> "BeliefMap":
        """Wrap a probability grid with unset variances."""
        prob_free = np.asarray(prob_free, dtype=np.float64)
        return cls(prob_free=prob_free, variance=np.full(prob_free.shape, np.nan))

    @property
    def width(self) -> int:
        return int(self.prob_free.shape[1])

    @property
    def height(self) -> int:
        return int(self.prob_free.shape[0])

    @property
    def shape(self) -> Tuple[int, int]:
        return (self.height, self.width)

    def known_mask(self) -> np.ndarray:
        return self.prob_free != UNKNOWN

    def free_mask(self) -> np.ndarray:
        return self.prob_free > UNKNOWN

    def copy(self) -> "BeliefMap":
        return BeliefMap(prob_free=self.prob_free.copy(), variance=self.variance.copy())


def world_to_cell(p: WorldPoint, plan: Floorplan) -> CellIndex:
    """Convert a metric point to the cell containing it.

    Args:
        p: Point in meters
        plan: Floorplan providing extent and resolution

    Returns:
        CellIndex with floor(p / resolution) per axis

    Raises:
        GridBoundsError: If the point lies outside the plan's metric extent
    """
    cells = []
    for axis, value, size in (("x", p[0], plan.width), ("y", p[1], plan.height)):
        extent = size * plan.resolution
        if not (math.isfinite(value) and 0.0 <= value < extent):
            raise GridBoundsError(axis, value, extent)
        cells.append(min(int(math.floor(value / plan.resolution)), size - 1))
    return CellIndex(cells[0], cells[1])


def cell_to_world(cell: Sequence[int], plan: Floorplan) -> WorldPoint:
    """Metric center of a cell."""
    return WorldPoint((cell[0] + 0.5) * plan.resolution, (cell[1] + 0.5) * plan.resolution)


def bounding_box(points: Iterable[Sequence[int]]) -> Rect:
    """Smallest inclusive rectangle containing every point.

    Raises:
        DomainError: If points is empty
    """
    coords = np.array([(int(p[0]), int(p[1])) for p in points], dtype=np.int64)
    if coords.size == 0:
        raise DomainError("bounding_box of an empty point set")
    lo = coords.min(axis=0)
    hi = coords.max(axis=0)
    return Rect(CellIndex(int(lo[0]), int(lo[1])), CellIndex(int(hi[0]), int(hi[1])))
