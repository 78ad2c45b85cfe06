"""Endpoint refinement and subsegment partitioning of router-to-pose rays."""

import logging
from dataclasses import dataclass
from typing import List, Mapping, Optional, Sequence

from ..exceptions import DomainError
from ..models import CellIndex
from ..raycast.traversal import RayPath, traverse

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class RefinedRay:
    """Part of a router-to-pose ray between two endpoints with known k.

    ``cells`` runs from ``lower`` to ``upper`` inclusive along the original ray.
    """

    lower: CellIndex
    upper: CellIndex
    k_lower: int
    k_upper: int
    cells: RayPath


@dataclass(frozen=True)
class Subsegment:
    """Ray part between two consecutive k-carrying cells."""

    start: CellIndex
    end: CellIndex
    delta_k: int
    cells: RayPath

    @property
    def length(self) -> int:
        """L: steps from start to end."""
        return len(self.cells) - 1

    @property
    def intermediate_count(self) -> int:
        """M: cells strictly between start and end."""
        return len(self.cells) - 2

    @property
    def intermediate_cells(self) -> Sequence[CellIndex]:
        return self.cells[1:-1]


def refine_endpoints(
    router: Sequence[int],
    target: Sequence[int],
    target_k: int,
    intersections: Mapping[CellIndex, int],
    path: Optional[RayPath] = None,
) -> RefinedRay:
    """Tighten the ray from router to target using on-ray trajectory cells.

    The upper endpoint retreats to the nearest on-ray cell whose k equals the
    smallest k >= 1 seen on the ray (the target included). The lower endpoint
    advances to the farthest on-ray cell with k = 0 before the upper one.

    Args:
        router: Router cell (k = 0)
        target: Pose of the sample being processed
        target_k: k of the target for this router
        intersections: Trajectory cells with their k for this router
        path: Precomputed traverse(router, target)

    Returns:
        RefinedRay; without on-ray intersections it spans router to target

    Raises:
        DomainError: If target_k < 1
    """
    if target_k < 1:
        raise DomainError(f"refinement needs a target with k >= 1, got {target_k}")
    path = path if path is not None else traverse(router, target)
    last = len(path) - 1
    ks = {
        i: intersections[c]
        for i, c in enumerate(path.cells[1:last], start=1)
        if c in intersections
    }
    ks[last] = target_k

    k_min = min(k for k in ks.values() if k >= 1)
    upper = min(i for i, k in ks.items() if k == k_min)
    zeros = [i for i, k in ks.items() if k == 0 and i < upper]
    lower = max(zeros) if zeros else 0
    return RefinedRay(
        lower=path[lower],
        upper=path[upper],
        k_lower=0,
        k_upper=ks[upper],
        cells=RayPath(path[lower : upper + 1]),
    )


def subsegment_deltas(ray: RefinedRay, intersections: Mapping[CellIndex, int]) -> List[Subsegment]:
    """Partition a refined ray at its interior trajectory intersections.

    Each part carries the difference of the k-values at its two ends; parts
    may have negative delta_k when readings are inconsistent.
    """
    cells = ray.cells
    last = len(cells) - 1
    if last < 1:
        return []
    marks = [(0, ray.k_lower)]
    marks.extend((i, intersections[cells[i]]) for i in range(1, last) if cells[i] in intersections)
    marks.append((last, ray.k_upper))
    return [
        Subsegment(
            start=cells[s],
            end=cells[e],
            delta_k=k_e - k_s,
            cells=RayPath(cells[s : e + 1]),
        )
        for (s, k_s), (e, k_e) in zip(marks, marks[1:])
    ]
