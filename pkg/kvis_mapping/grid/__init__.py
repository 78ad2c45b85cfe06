# Grid data structures, coordinate transforms and raster I/O

from .floorplan import (
    UNKNOWN,
    BeliefMap,
    Floorplan,
    bounding_box,
    cell_to_world,
    world_to_cell,
)
from .imaging import (
    decode_belief,
    encode_belief,
    export_grayscale,
    export_wall_grid,
    floorplan_from_pixels,
    load_floorplan,
    plan_to_pixels,
    read_belief,
    read_grayscale,
    write_grayscale,
)

__all__ = [
    # Types
    "Floorplan",
    "BeliefMap",
    "UNKNOWN",
    # Transforms
    "world_to_cell",
    "cell_to_world",
    "bounding_box",
    # Raster I/O
    "encode_belief",
    "decode_belief",
    "export_grayscale",
    "export_wall_grid",
    "write_grayscale",
    "read_grayscale",
    "read_belief",
    "floorplan_from_pixels",
    "load_floorplan",
    "plan_to_pixels",
]
