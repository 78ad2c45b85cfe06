"""RSSI bounds: 1-D k-means fitting and the RSSI -> k classifier.

Bounds t_1 > t_2 > ... > t_K split the RSSI axis into K + 1 bands. A reading
stronger than t_1 sees no wall; a reading with t_k >= rssi > t_(k+1) sees k
walls; anything at or below t_K sees K walls.
"""

import logging
import math
from pathlib import Path
from typing import List, Optional, Sequence, Tuple, Union

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, TypeAdapter, ValidationError, model_validator

from ..exceptions import DegenerateInputError, DomainError, LoadError, ThresholdError

logger = logging.getLogger(__name__)

MAX_ITERATIONS = 100


class RssiThresholds(BaseModel):
    """Strictly decreasing RSSI bounds, optionally with the centroids they came from."""

    model_config = ConfigDict(frozen=True)

    bounds: Tuple[float, ...] = Field(min_length=1, description="t_1 > ... > t_K in dBm")
    centroids: Optional[Tuple[float, ...]] = Field(
        default=None, description="C_0 > ... > C_K in dBm when fitted"
    )

    @model_validator(mode="after")
    def _check_order(self) -> "RssiThresholds":
        if any(a <= b for a, b in zip(self.bounds, self.bounds[1:])):
            raise ValueError(f"bounds must be strictly decreasing: {self.bounds}")
        if self.centroids is not None:
            c = self.centroids
            if len(c) != len(self.bounds) + 1:
                raise ValueError(f"{len(self.bounds)} bounds need {len(self.bounds) + 1} centroids")
            if any(a <= b for a, b in zip(c, c[1:])):
                raise ValueError(f"centroids must be strictly decreasing: {c}")
            for k, t in enumerate(self.bounds):
                if not math.isclose(t, (c[k] + c[k + 1]) / 2.0, rel_tol=1e-9, abs_tol=1e-9):
                    raise ValueError(f"bound t_{k + 1} = {t} is not the midpoint of its centroids")
        return self

    @property
    def k_max(self) -> int:
        return len(self.bounds)

    @classmethod
    def from_centroids(cls, centroids: Sequence[float]) -> "RssiThresholds":
        """Build bounds as midpoints of descending centroids.

        Raises:
            ThresholdError: If the centroids are not strictly decreasing
        """
        c = tuple(float(v) for v in centroids)
        try:
            return cls(
                bounds=tuple((a + b) / 2.0 for a, b in zip(c, c[1:])),
                centroids=c,
            )
        except ValidationError as e:
            raise ThresholdError(str(e)) from e

    @classmethod
    def explicit(cls, bounds: Sequence[float]) -> "RssiThresholds":
        """Build thresholds from configured bounds.

        Raises:
            ThresholdError: If the bounds are not strictly decreasing
        """
        try:
            return cls(bounds=tuple(float(t) for t in bounds))
        except ValidationError as e:
            raise ThresholdError(str(e)) from e


def _farthest_point_seeds(x: np.ndarray, clusters: int, rng: np.random.Generator) -> np.ndarray:
    seeds = [float(x[rng.integers(x.size)])]
    nearest = np.abs(x - seeds[0])
    while len(seeds) < clusters:
        seeds.append(float(x[int(np.argmax(nearest))]))
        nearest = np.minimum(nearest, np.abs(x - seeds[-1]))
    return np.array(seeds)


def kmeans_1d(samples: Sequence[float], clusters: int, seed: int) -> List[float]:
    """Lloyd's k-means on 1-D data with farthest-point seeding.

    Args:
        samples: Values to cluster
        clusters: Number of clusters
        seed: Seed for the first centroid pick

    Returns:
        Centroids in decreasing order

    Raises:
        DomainError: If clusters < 1 or there are fewer samples than clusters
        DegenerateInputError: If there are fewer distinct values than clusters
    """
    x = np.asarray(samples, dtype=np.float64).ravel()
    if clusters < 1:
        raise DomainError(f"clusters must be >= 1, got {clusters}")
    if x.size < clusters:
        raise DomainError(f"{x.size} samples cannot form {clusters} clusters")
    distinct = np.unique(x).size
    if distinct < clusters:
        raise DegenerateInputError(f"{distinct} distinct samples for {clusters} clusters")

    rng = np.random.default_rng(seed)
    centroids = _farthest_point_seeds(x, clusters, rng)
    assignment: Optional[np.ndarray] = None
    for iteration in range(1, MAX_ITERATIONS + 1):
        new_assignment = np.argmin(np.abs(x[:, None] - centroids[None, :]), axis=1)
        if assignment is not None and np.array_equal(new_assignment, assignment):
            break
        assignment = new_assignment
        for c in range(clusters):
            members = x[assignment == c]
            if members.size:
                centroids[c] = members.mean()
    else:
        logger.warning(f"k-means stopped after {MAX_ITERATIONS} iterations without converging")
    logger.debug(f"k-means with {clusters} clusters finished after {iteration} iterations")
    return sorted((float(c) for c in centroids), reverse=True)


def fit_thresholds(samples: Sequence[float], k_max: int, seed: int) -> RssiThresholds:
    """Fit K bounds from K + 1 k-means centroids.

    Raises:
        DomainError: If fewer than K + 1 samples are given
        DegenerateInputError: Propagated from kmeans_1d
        ThresholdError: If the fitted centroids collapse
    """
    if k_max < 1:
        raise DomainError(f"K must be >= 1, got {k_max}")
    centroids = kmeans_1d(samples, k_max + 1, seed)
    thresholds = RssiThresholds.from_centroids(centroids)
    logger.info(
        f"Fitted thresholds from {len(samples)} samples: centroids "
        f"{[round(c, 2) for c in centroids]}, bounds {[round(t, 2) for t in thresholds.bounds]}"
    )
    return thresholds


def classify_k(rssi: float, th: RssiThresholds) -> int:
    """Number of walls implied by one reading: the count of bounds t with t >= rssi."""
    return sum(1 for t in th.bounds if t >= rssi)


def classify_many(rssi: Sequence[float], th: RssiThresholds) -> np.ndarray:
    """Vectorized classify_k; NaN readings map to -1."""
    values = np.asarray(rssi, dtype=np.float64)
    bounds = np.asarray(th.bounds)
    k = np.sum(bounds[None, :] >= values.reshape(-1, 1), axis=1).reshape(values.shape)
    return np.where(np.isnan(values), -1, k).astype(np.int64)


_THRESHOLD_LIST = TypeAdapter(List[RssiThresholds])


def write_thresholds(thresholds: Sequence[RssiThresholds], path: Union[str, Path]) -> Path:
    """Write one threshold set per router as JSON."""
    path = Path(path)
    path.write_text(_THRESHOLD_LIST.dump_json(list(thresholds), indent=2).decode() + "\n")
    return path


def read_thresholds(path: Union[str, Path]) -> List[RssiThresholds]:
    """Read threshold sets written by write_thresholds.

    Raises:
        LoadError: If the file is unreadable or invalid
    """
    path = Path(path)
    try:
        return _THRESHOLD_LIST.validate_json(path.read_text())
    except (OSError, ValueError) as e:
        raise LoadError(path, f"cannot read thresholds: {e}") from e
