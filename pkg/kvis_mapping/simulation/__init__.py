# Synthetic floorplans and trajectory generation

from .scenes import build_scene, empty_room, nested_rooms, random_plan, room_row, single_wall
from .trajectories import generate_trajectory, ring_cells

__all__ = [
    "empty_room",
    "single_wall",
    "room_row",
    "nested_rooms",
    "random_plan",
    "build_scene",
    "generate_trajectory",
    "ring_cells",
]
