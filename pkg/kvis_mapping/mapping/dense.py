"""Dense inverse k-visibility: walls from a complete k-field."""

import logging
from typing import Iterator, List, Optional, Tuple

import numpy as np

from ..exceptions import InconsistentFieldError
from ..models import CellIndex
from ..raycast.kfield import WALL_SENTINEL, KField
from ..raycast.traversal import supercover_steps

logger = logging.getLogger(__name__)


def perimeter_cells(width: int, height: int) -> Iterator[CellIndex]:
    """Boundary cells of a grid, clockwise from the top-left corner, each once."""
    if width == 1 or height == 1:
        for y in range(height):
            for x in range(width):
                yield CellIndex(x, y)
        return
    for x in range(width):
        yield CellIndex(x, 0)
    for y in range(1, height):
        yield CellIndex(width - 1, y)
    for x in range(width - 2, -1, -1):
        yield CellIndex(x, height - 1)
    for y in range(height - 2, 0, -1):
        yield CellIndex(0, y)


def dense_inverse(field: KField) -> np.ndarray:
    """Recover wall cells where k increases along rays cast from the router.

    A ray is cast from the router to every perimeter cell. Walking outward
    step by step, when a step's k exceeds the last known k on the ray, the
    sentinel cells of the first wall step since that known step are marked.
    A corner step holding a sentinel counts as a wall step. An increase
    between two adjacent known steps localizes no wall cell and marks
    nothing; decreases are ignored.

    Args:
        field: k-field with wall sentinels

    Returns:
        Boolean wall grid with the field's shape

    Raises:
        InconsistentFieldError: If the router is off the grid, on a sentinel or k(router) != 0
    """
    router = field.router
    if not field.in_bounds(router):
        raise InconsistentFieldError(f"router {tuple(router)} is outside the k-field")
    router_k = int(field.values[router.y, router.x])
    if router_k != 0:
        raise InconsistentFieldError(f"k at router {tuple(router)} is {router_k}, expected 0")

    values = field.values.tolist()
    walls = np.zeros(field.values.shape, dtype=bool)
    rays = 0
    for target in perimeter_cells(field.width, field.height):
        rays += 1
        previous = 0
        first_gap: Optional[List[Tuple[int, int]]] = None
        for step in supercover_steps(router.x, router.y, target.x, target.y)[1:]:
            ks = [values[y][x] for x, y in step]
            if WALL_SENTINEL in ks:
                if first_gap is None:
                    first_gap = [c for c, k in zip(step, ks) if k == WALL_SENTINEL]
                continue
            k = max(ks)
            if k > previous and first_gap is not None:
                for x, y in first_gap:
                    walls[y, x] = True
            previous = k
            first_gap = None
    logger.info(f"Dense inversion cast {rays} rays and marked {int(walls.sum())} wall cells")
    return walls
