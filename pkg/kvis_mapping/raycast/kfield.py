"""Forward k-visibility: per-cell wall-crossing counts relative to one router."""

import logging
import re
from dataclasses import dataclass
from pathlib import Path
from typing import Optional, Sequence, Union

import numpy as np

from ..exceptions import DomainError, GridBoundsError, LoadError
from ..grid.floorplan import Floorplan
from ..models import CellIndex
from .traversal import crossing_counter

logger = logging.getLogger(__name__)

WALL_SENTINEL = -1

_ROUTER_HEADER = re.compile(r"router\s*=\s*(-?\d+)\s*,\s*(-?\d+)")


@dataclass(eq=False)
class KField:
    """Per-cell k-values for one router; wall cells hold WALL_SENTINEL."""

    values: np.ndarray
    router: CellIndex

    def __post_init__(self) -> None:
        self.values = np.asarray(self.values, dtype=np.int64)
        if self.values.ndim != 2 or self.values.size == 0:
            raise DomainError(f"k-field must be a non-empty 2-D grid, got {self.values.shape}")
        if np.any(self.values < WALL_SENTINEL):
            raise DomainError("k-field values must be non-negative or the wall sentinel")
        self.router = CellIndex(int(self.router[0]), int(self.router[1]))

    @property
    def width(self) -> int:
        return int(self.values.shape[1])

    @property
    def height(self) -> int:
        return int(self.values.shape[0])

    def in_bounds(self, cell: Sequence[int]) -> bool:
        return 0 <= cell[0] < self.width and 0 <= cell[1] < self.height

    def value(self, cell: Sequence[int]) -> Optional[int]:
        """k at a cell, or None for a wall sentinel."""
        v = int(self.values[cell[1], cell[0]])
        return None if v == WALL_SENTINEL else v

    def wall_mask(self) -> np.ndarray:
        return self.values == WALL_SENTINEL

    def to_csv(self, path: Union[str, Path]) -> Path:
        """Write the grid as comma-separated integers under a router header."""
        path = Path(path)
        np.savetxt(
            path,
            self.values,
            fmt="%d",
            delimiter=",",
            header=f"router={self.router.x},{self.router.y}",
        )
        return path

    @classmethod
    def from_csv(cls, path: Union[str, Path]) -> "KField":
        """Read a grid written by to_csv.

        Raises:
            LoadError: If the file is missing, malformed or lacks the router header
        """
        path = Path(path)
        try:
            with path.open() as fh:
                header = fh.readline()
            values = np.loadtxt(path, dtype=np.int64, delimiter=",", comments="#", ndmin=2)
        except (OSError, ValueError) as e:
            raise LoadError(path, f"cannot read k-field: {e}") from e
        match = _ROUTER_HEADER.search(header)
        if match is None:
            raise LoadError(path, "missing '# router=x,y' header")
        try:
            return cls(values=values, router=CellIndex(int(match[1]), int(match[2])))
        except DomainError as e:
            raise LoadError(path, str(e)) from e


def k_field(plan: Floorplan, router: Sequence[int]) -> KField:
    """Compute the ground-truth k-field of a plan for one router.

    Args:
        plan: Ground-truth floorplan
        router: Router cell

    Returns:
        KField where each free cell holds count_wall_crossings(plan, router, cell)

    Raises:
        GridBoundsError: If the router is outside the plan
        DomainError: If the router is on a wall cell
    """
    if not plan.in_bounds(router):
        axis = "x" if not 0 <= router[0] < plan.width else "y"
        limit = plan.width if axis == "x" else plan.height
        raise GridBoundsError(axis, router[0] if axis == "x" else router[1], limit)
    if plan.is_wall(router):
        raise DomainError(f"router at {tuple(router)} is on a wall cell")

    count = crossing_counter(plan)
    values = np.full(plan.shape, WALL_SENTINEL, dtype=np.int64)
    for cell in plan.free_cells():
        values[cell.y, cell.x] = count(router, cell)
    logger.debug(
        f"k-field for router {tuple(router)}: max k = {int(values.max())} "
        f"over {int(np.count_nonzero(values >= 0))} free cells"
    )
    return KField(values=values, router=CellIndex(int(router[0]), int(router[1])))
