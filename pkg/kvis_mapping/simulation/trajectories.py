"""Wall-following trajectory generation on free space."""

import logging
from collections import deque
from typing import Dict, List, Optional, Set, Tuple

import numpy as np
from scipy import ndimage

from ..exceptions import DomainError
from ..grid.floorplan import Floorplan
from ..models import CellIndex, TrajectoryPattern

logger = logging.getLogger(__name__)

# Clockwise in image coordinates (y down): E, SE, S, SW, W, NW, N, NE
DIRECTIONS: Tuple[Tuple[int, int], ...] = (
    (1, 0),
    (1, 1),
    (0, 1),
    (-1, 1),
    (-1, 0),
    (-1, -1),
    (0, -1),
    (1, -1),
)
# Straight first, then widening turns, reversing last
TURN_ORDER = (0, -1, 1, -2, 2, -3, 3, 4)

FOUR_CONNECTED = ndimage.generate_binary_structure(2, 1)


def ring_cells(plan: Floorplan) -> np.ndarray:
    """Free cells with a wall or the grid edge among their 8 neighbours."""
    padded = np.pad(plan.walls, 1, constant_values=True)
    near_wall = ndimage.binary_dilation(padded, structure=np.ones((3, 3), dtype=bool))[1:-1, 1:-1]
    return near_wall & ~plan.walls


def _can_step(free: np.ndarray, x: int, y: int, dx: int, dy: int) -> bool:
    h, w = free.shape
    nx, ny = x + dx, y + dy
    if not (0 <= nx < w and 0 <= ny < h) or not free[ny, nx]:
        return False
    if dx and dy:
        return bool(free[y, nx] and free[ny, x])
    return True


def _path_to_nearest(
    free: np.ndarray, start: Tuple[int, int], targets: Set[Tuple[int, int]]
) -> Optional[List[Tuple[int, int]]]:
    """Shortest 8-connected path (no corner cutting) from start to any target, start excluded."""
    parents: Dict[Tuple[int, int], Optional[Tuple[int, int]]] = {start: None}
    queue = deque([start])
    while queue:
        cell = queue.popleft()
        if cell in targets and cell != start:
            path = []
            node: Optional[Tuple[int, int]] = cell
            while node is not None and node != start:
                path.append(node)
                node = parents[node]
            return path[::-1]
        for dx, dy in DIRECTIONS:
            if _can_step(free, cell[0], cell[1], dx, dy):
                nxt = (cell[0] + dx, cell[1] + dy)
                if nxt not in parents:
                    parents[nxt] = cell
                    queue.append(nxt)
    return None


def _follow_walls(
    free: np.ndarray, ring: Set[Tuple[int, int]], start: Tuple[int, int]
) -> List[CellIndex]:
    """Greedy wall-following walk over ring cells.

    When no unvisited ring cell is adjacent the walk jumps along a shortest
    path to the nearest one.
    """
    unvisited = set(ring)
    unvisited.discard(start)
    walk = [start]
    heading = 0
    current = start
    while unvisited:
        moved = False
        for turn in TURN_ORDER:
            d = (heading + turn) % 8
            dx, dy = DIRECTIONS[d]
            nxt = (current[0] + dx, current[1] + dy)
            if nxt in unvisited and _can_step(free, current[0], current[1], dx, dy):
                walk.append(nxt)
                unvisited.discard(nxt)
                current, heading, moved = nxt, d, True
                break
        if moved:
            continue
        jump = _path_to_nearest(free, current, unvisited)
        if jump is None:
            logger.warning(f"{len(unvisited)} ring cells unreachable from {current}")
            break
        for cell in jump:
            walk.append(cell)
            unvisited.discard(cell)
        previous = walk[-2]
        step = (jump[-1][0] - previous[0], jump[-1][1] - previous[1])
        heading = DIRECTIONS.index(step) if step in DIRECTIONS else heading
        current = jump[-1]
    return [CellIndex(x, y) for x, y in walk]


def generate_trajectory(
    plan: Floorplan, pattern: TrajectoryPattern, seed: int
) -> List[CellIndex]:
    """Generate a wall-following pose sequence.

    ``perimeter`` follows the walls of the free region holding router 0 (or
    the largest region when the plan has no routers); other regions are
    skipped with a warning. ``rooms`` follows the walls of every free region
    in turn and concatenates the walks. Within a region consecutive poses are
    8-adjacent; the seed picks where each walk starts.

    Raises:
        DomainError: If the plan has no free cell
    """
    free = ~plan.walls
    labels, n_regions = ndimage.label(free, structure=FOUR_CONNECTED)
    if n_regions == 0:
        raise DomainError("plan has no free cell")
    rng = np.random.default_rng(seed)
    ring = ring_cells(plan)

    pattern = TrajectoryPattern(pattern)
    if pattern == TrajectoryPattern.PERIMETER:
        if plan.routers:
            r = plan.routers[0]
            regions = [int(labels[r.y, r.x])]
        else:
            sizes = np.bincount(labels.ravel())[1:]
            regions = [int(np.argmax(sizes)) + 1]
        if n_regions > 1:
            logger.warning(f"perimeter pattern skips {n_regions - 1} unreachable free regions")
    else:
        regions = list(range(1, n_regions + 1))

    poses: List[CellIndex] = []
    for region in regions:
        ys, xs = np.nonzero(ring & (labels == region))
        cells = list(zip(xs.tolist(), ys.tolist()))
        start = cells[int(rng.integers(len(cells)))]
        poses.extend(_follow_walls(free, set(cells), start))
    logger.info(
        f"Generated {pattern.value} trajectory of {len(poses)} poses over {len(regions)} regions"
    )
    return poses
