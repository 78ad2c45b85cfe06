"""Built-in synthetic floorplans as boolean wall grids (True = wall)."""

import logging
from typing import Optional

import numpy as np

from ..config import SceneConfig
from ..exceptions import ConfigError
from ..models import SceneKind

logger = logging.getLogger(__name__)


def _border(width: int, height: int, thickness: int = 1) -> np.ndarray:
    walls = np.zeros((height, width), dtype=bool)
    walls[:thickness, :] = True
    walls[-thickness:, :] = True
    walls[:, :thickness] = True
    walls[:, -thickness:] = True
    return walls


def empty_room(width: int, height: int, thickness: int = 1) -> np.ndarray:
    """A single room enclosed by outer walls."""
    if width <= 2 * thickness or height <= 2 * thickness:
        raise ConfigError(
            f"{width}x{height} room leaves no free space inside {thickness}-cell walls"
        )
    return _border(width, height, thickness)


def single_wall(
    width: int, height: int, wall_x: Optional[int] = None, border: bool = True
) -> np.ndarray:
    """One full-height wall column, optionally inside outer walls."""
    wall_x = width // 2 if wall_x is None else wall_x
    if not 0 <= wall_x < width:
        raise ConfigError(f"wall column {wall_x} outside width {width}")
    walls = _border(width, height) if border else np.zeros((height, width), dtype=bool)
    walls[:, wall_x] = True
    return walls


def room_row(
    n_rooms: int,
    room_width: int,
    room_height: int,
    wall_thickness: int = 1,
    door_width: int = 0,
) -> np.ndarray:
    """Rooms side by side, separated by walls with optional centered doors.

    Args:
        n_rooms: Number of rooms
        room_width: Interior width of each room in cells
        room_height: Interior height in cells
        wall_thickness: Thickness of every wall in cells
        door_width: Height of the opening in each dividing wall (0 = closed)
    """
    if n_rooms < 1 or room_width < 1 or room_height < 1:
        raise ConfigError("room_row needs at least one room with positive size")
    if door_width > room_height:
        raise ConfigError(f"door of {door_width} cells does not fit a {room_height}-cell wall")
    t = wall_thickness
    width = n_rooms * room_width + (n_rooms + 1) * t
    height = room_height + 2 * t
    walls = _border(width, height, t)
    door_top = t + (room_height - door_width) // 2
    for i in range(1, n_rooms):
        x0 = i * (room_width + t)
        walls[:, x0 : x0 + t] = True
        if door_width:
            walls[door_top : door_top + door_width, x0 : x0 + t] = False
    return walls


def nested_rooms(width: int, height: int, inset: Optional[int] = None) -> np.ndarray:
    """A closed rectangular room inside another one."""
    inset = min(width, height) // 4 if inset is None else inset
    if width - 2 * inset < 3 or height - 2 * inset < 3 or inset < 2:
        raise ConfigError(f"inset {inset} leaves no room inside a {width}x{height} plan")
    walls = _border(width, height)
    inner = _border(width - 2 * inset, height - 2 * inset)
    walls[inset : height - inset, inset : width - inset] |= inner
    return walls


def random_plan(
    width: int, height: int, rng: np.random.Generator, density: float = 0.1
) -> np.ndarray:
    """Outer walls plus random axis-aligned wall segments of thickness 1 or 2.

    Segments are added until the interior wall fraction reaches ``density``.
    """
    walls = _border(width, height)
    interior = max((width - 2) * (height - 2), 1)
    for _ in range(10 * (width + height)):
        if np.count_nonzero(walls[1:-1, 1:-1]) >= density * interior:
            break
        thick = int(rng.integers(1, 3))
        if rng.random() < 0.5:
            length = int(rng.integers(2, max(3, width // 2)))
            x = int(rng.integers(1, max(2, width - length)))
            y = int(rng.integers(1, max(2, height - thick)))
            walls[y : y + thick, x : x + length] = True
        else:
            length = int(rng.integers(2, max(3, height // 2)))
            x = int(rng.integers(1, max(2, width - thick)))
            y = int(rng.integers(1, max(2, height - length)))
            walls[y : y + length, x : x + thick] = True
    return walls


def build_scene(scene: SceneConfig, rng: np.random.Generator) -> np.ndarray:
    """Wall grid for a scene config.

    For ``room_row`` the width and height are the interior size of each room;
    for every other kind they are the overall plan size.
    """
    if scene.kind == SceneKind.EMPTY_ROOM:
        walls = empty_room(scene.width, scene.height, scene.wall_thickness)
    elif scene.kind == SceneKind.SINGLE_WALL:
        walls = single_wall(scene.width, scene.height)
    elif scene.kind == SceneKind.ROOM_ROW:
        walls = room_row(
            scene.n_rooms, scene.width, scene.height, scene.wall_thickness, scene.door_width
        )
    elif scene.kind == SceneKind.NESTED_ROOMS:
        walls = nested_rooms(scene.width, scene.height)
    else:
        walls = random_plan(scene.width, scene.height, rng, scene.wall_density)
    logger.debug(f"Built {scene.kind.value} scene {walls.shape[1]}x{walls.shape[0]}")
    return walls
