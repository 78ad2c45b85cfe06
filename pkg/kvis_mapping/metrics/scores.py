"""Map comparison scores: k-value accuracy, masked IOU and MSE."""

import logging
from typing import NamedTuple, Sequence, Tuple, Union

import numpy as np

from ..exceptions import DomainError, UndefinedScoreError
from ..grid.floorplan import UNKNOWN, BeliefMap, Floorplan
from ..grid.imaging import FREE_PIXEL, UNKNOWN_PIXEL, WALL_PIXEL
from ..models import MseScale

logger = logging.getLogger(__name__)

MapLike = Union[BeliefMap, Floorplan]


class KAccuracy(NamedTuple):
    true_count: int
    false_count: int
    pct: float


def k_accuracy(est_k: Sequence[int], gt_k: Sequence[int]) -> KAccuracy:
    """Element-by-element comparison of predicted and true k-values.

    The percentage is taken over the evaluated points.

    Raises:
        DomainError: If the sequences differ in length
        UndefinedScoreError: If there are no points
    """
    est = np.asarray(est_k, dtype=np.int64).ravel()
    gt = np.asarray(gt_k, dtype=np.int64).ravel()
    if est.size != gt.size:
        raise DomainError(f"{est.size} estimates for {gt.size} ground-truth values")
    if est.size == 0:
        raise UndefinedScoreError("k-accuracy of zero points")
    true_count = int(np.count_nonzero(est == gt))
    false_count = int(est.size - true_count)
    return KAccuracy(true_count, false_count, 100.0 * true_count / est.size)


def _masks(m: MapLike) -> Tuple[np.ndarray, np.ndarray]:
    """(known, free) masks; a floorplan is fully known."""
    if isinstance(m, Floorplan):
        return np.ones(m.shape, dtype=bool), ~m.walls
    return m.prob_free != UNKNOWN, m.prob_free > UNKNOWN


def _check_shapes(est: MapLike, gt: MapLike) -> None:
    if est.shape != gt.shape:
        raise DomainError(f"map shapes differ: {est.shape} vs {gt.shape}")


def iou(est: MapLike, gt: MapLike) -> float:
    """Free-space intersection over union on cells known in both maps.

    Raises:
        DomainError: If the shapes differ
        UndefinedScoreError: If no masked cell is free in either map
    """
    _check_shapes(est, gt)
    est_known, est_free = _masks(est)
    gt_known, gt_free = _masks(gt)
    mask = est_known & gt_known
    intersection = int(np.count_nonzero(mask & est_free & gt_free))
    union = int(np.count_nonzero(mask & (est_free | gt_free)))
    if union == 0:
        raise UndefinedScoreError("IOU union is empty")
    return intersection / union


def encode_ternary(m: MapLike) -> np.ndarray:
    """8-bit encoding with free 255, wall 0 and unknown 127."""
    known, free = _masks(m)
    pixels = np.full(m.shape, UNKNOWN_PIXEL, dtype=np.int64)
    pixels[known & free] = FREE_PIXEL
    pixels[known & ~free] = WALL_PIXEL
    return pixels


def mse(est: MapLike, gt: MapLike, scale: MseScale = MseScale.NORMALIZED) -> float:
    """Mean squared intensity difference over all cells.

    The raw scale is in 8-bit units squared; the normalized scale divides by 255^2.

    Raises:
        DomainError: If the shapes differ
    """
    _check_shapes(est, gt)
    diff = encode_ternary(est) - encode_ternary(gt)
    raw = float(np.mean(diff.astype(np.float64) ** 2))
    return raw if scale == MseScale.RAW else raw / (255.0**2)
