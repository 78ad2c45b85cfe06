"""Supercover grid traversal and wall-crossing counts.

The traversal follows the ideal segment between two cell centers and returns
every cell whose interior it touches. Where the segment passes exactly through
a lattice corner, both diagonal neighbours are emitted (x-neighbour first,
then y-neighbour) before the diagonal cell, so a ray never slips between two
wall cells that share only a corner.

Crossing counts treat the two corner neighbours as one step, so a straight
wall clipped on either side of a corner stays one wall.
"""

import logging
from dataclasses import dataclass
from typing import Callable, Iterator, List, Optional, Sequence, Tuple, overload

from ..exceptions import DomainError, GridBoundsError
from ..grid.floorplan import Floorplan
from ..models import CellIndex

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class RayPath:
    """Ordered cells from endpoint a to endpoint b inclusive."""

    cells: Tuple[CellIndex, ...]

    def __len__(self) -> int:
        return len(self.cells)

    def __iter__(self) -> Iterator[CellIndex]:
        return iter(self.cells)

    @overload
    def __getitem__(self, index: int) -> CellIndex: ...

    @overload
    def __getitem__(self, index: slice) -> Tuple[CellIndex, ...]: ...

    def __getitem__(self, index):  # type: ignore[no-untyped-def]
        return self.cells[index]

    @property
    def start(self) -> CellIndex:
        return self.cells[0]

    @property
    def end(self) -> CellIndex:
        return self.cells[-1]


def supercover_steps(ax: int, ay: int, bx: int, by: int) -> List[Tuple[Tuple[int, int], ...]]:
    """Supercover walk grouped into steps.

    A step is one cell, except at an exact corner crossing where the
    x-neighbour and y-neighbour form a single step; the diagonal cell follows
    as its own step. Steps are decided by comparing the parametric distance to
    the next vertical and horizontal cell boundary, (ix + 1/2)/nx against
    (iy + 1/2)/ny, in integer arithmetic; equality is an exact corner crossing.
    """
    dx = bx - ax
    dy = by - ay
    nx = abs(dx)
    ny = abs(dy)
    sx = 1 if dx > 0 else -1
    sy = 1 if dy > 0 else -1

    x, y = ax, ay
    steps: List[Tuple[Tuple[int, int], ...]] = [((x, y),)]
    ix = iy = 0
    while ix < nx or iy < ny:
        decision = (1 + 2 * ix) * ny - (1 + 2 * iy) * nx
        if decision == 0:
            steps.append(((x + sx, y), (x, y + sy)))
            x += sx
            y += sy
            ix += 1
            iy += 1
        elif decision < 0:
            x += sx
            ix += 1
        else:
            y += sy
            iy += 1
        steps.append(((x, y),))
    return steps


def supercover(ax: int, ay: int, bx: int, by: int) -> List[Tuple[int, int]]:
    """Raw supercover walk on plain integer tuples, corner neighbours flattened in."""
    return [cell for step in supercover_steps(ax, ay, bx, by) for cell in step]


def _check_bounds(cell: Sequence[int], width: Optional[int], height: Optional[int]) -> None:
    if cell[0] < 0 or (width is not None and cell[0] >= width):
        raise GridBoundsError("x", cell[0], width if width is not None else float("inf"))
    if cell[1] < 0 or (height is not None and cell[1] >= height):
        raise GridBoundsError("y", cell[1], height if height is not None else float("inf"))


def traverse(
    a: Sequence[int],
    b: Sequence[int],
    width: Optional[int] = None,
    height: Optional[int] = None,
) -> RayPath:
    """Cells intersected by the center-to-center segment from a to b.

    Args:
        a: Start cell
        b: End cell
        width: Grid width used for the bounds check, if known
        height: Grid height used for the bounds check, if known

    Returns:
        RayPath starting at a and ending at b

    Raises:
        GridBoundsError: If an endpoint lies outside the grid
    """
    _check_bounds(a, width, height)
    _check_bounds(b, width, height)
    cells = supercover(int(a[0]), int(a[1]), int(b[0]), int(b[1]))
    return RayPath(tuple(CellIndex(x, y) for x, y in cells))


def count_wall_runs(flags: Sequence[bool]) -> int:
    """Number of maximal runs of True values."""
    runs = 0
    previous = False
    for flag in flags:
        if flag and not previous:
            runs += 1
        previous = flag
    return runs


def _crossings(rows: List[List[bool]], a: Tuple[int, int], b: Tuple[int, int]) -> int:
    steps = supercover_steps(a[0], a[1], b[0], b[1])[1:-1]
    return count_wall_runs([any(rows[y][x] for x, y in step) for step in steps])


def count_wall_crossings(plan: Floorplan, a: Sequence[int], b: Sequence[int]) -> int:
    """Number of distinct walls the segment between two free cells crosses.

    A wall is a maximal contiguous run of wall steps along the walk from a
    to b, where a corner step is a wall when either of its two cells is.
    The endpoint cells are excluded, and a thick wall counts once.

    Raises:
        GridBoundsError: If an endpoint lies outside the plan
        DomainError: If an endpoint is a wall cell
    """
    for name, cell in (("a", a), ("b", b)):
        _check_bounds(cell, plan.width, plan.height)
        if plan.is_wall(cell):
            raise DomainError(f"endpoint {name} at {tuple(cell)} is a wall cell")
    steps = supercover_steps(int(a[0]), int(a[1]), int(b[0]), int(b[1]))[1:-1]
    return count_wall_runs([any(plan.is_wall(c) for c in step) for step in steps])


def crossing_counter(plan: Floorplan) -> Callable[[Sequence[int], Sequence[int]], int]:
    """Return a fast unchecked crossing counter bound to a plan's walls.

    Callers guarantee both endpoints are in-bounds free cells.
    """
    rows = plan.walls.tolist()

    def count(a: Sequence[int], b: Sequence[int]) -> int:
        return _crossings(rows, (int(a[0]), int(a[1])), (int(b[0]), int(b[1])))

    return count
