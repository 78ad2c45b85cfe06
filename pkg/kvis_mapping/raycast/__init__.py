# Grid ray traversal and the forward k-visibility oracle

from .kfield import WALL_SENTINEL, KField, k_field
from .traversal import (
    RayPath,
    count_wall_crossings,
    count_wall_runs,
    crossing_counter,
    supercover,
    supercover_steps,
    traverse,
)

__all__ = [
    "RayPath",
    "traverse",
    "supercover",
    "supercover_steps",
    "count_wall_runs",
    "count_wall_crossings",
    "crossing_counter",
    "KField",
    "WALL_SENTINEL",
    "k_field",
]
