# Dense and sparse inverse k-visibility mapping

from .dense import dense_inverse, perimeter_cells
from .evidence import WallEvidence, fuse, fuse_arrays, peak_probability, wall_probability
from .rays import RefinedRay, Subsegment, refine_endpoints, subsegment_deltas
from .sparse import MappingResult, MappingTrace, SparseMapper, run_mapper
from .trajectory import (
    NO_K,
    Trajectory,
    TrajectoryRun,
    TrajectorySample,
    focused_k,
    intersection_lookup,
    segment_trajectory,
    select_focused_router,
)

__all__ = [
    # Trajectories
    "NO_K",
    "Trajectory",
    "TrajectorySample",
    "TrajectoryRun",
    "segment_trajectory",
    "select_focused_router",
    "intersection_lookup",
    "focused_k",
    # Rays
    "RefinedRay",
    "Subsegment",
    "refine_endpoints",
    "subsegment_deltas",
    # Evidence
    "WallEvidence",
    "peak_probability",
    "wall_probability",
    "fuse",
    "fuse_arrays",
    # Mappers
    "dense_inverse",
    "perimeter_cells",
    "SparseMapper",
    "MappingResult",
    "MappingTrace",
    "run_mapper",
]
