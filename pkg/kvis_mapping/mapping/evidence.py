"""Per-cell wall evidence along subsegments and inverse-variance fusion."""

import logging
import math
from dataclasses import dataclass
from typing import Tuple

import numpy as np

from ..config import MapperConfig
from ..exceptions import DomainError
from ..models import WallMode
from .rays import Subsegment

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class WallEvidence:
    """Wall probability for each intermediate cell of a subsegment, with one shared variance."""

    mu: np.ndarray
    variance: float

    @property
    def sigma(self) -> float:
        return math.sqrt(self.variance)


def peak_probability(intermediate_count: int) -> float:
    """Peak wall probability p* = exp(-(1/M)^2) for M intermediate cells."""
    return math.exp(-((1.0 / intermediate_count) ** 2))


def _bumps(positions: np.ndarray, length: int, walls: int) -> np.ndarray:
    # each bump narrows to L/(4c) so c bumps keep c separate peaks
    width = length / (4.0 * walls)
    centers = np.arange(1, walls + 1) * (length / (walls + 1.0))
    return np.exp(-(((positions[:, None] - centers[None, :]) / width) ** 2)).sum(axis=1)


def wall_probability(sub: Subsegment, cfg: MapperConfig) -> WallEvidence:
    """Wall probability of each cell strictly inside a subsegment.

    Delta k = 0 carries no wall mass. For delta k = c >= 1 the default mode
    places c Gaussian bumps at fractions 1/(c+1) .. c/(c+1) of the subsegment
    (a single bump at the midpoint for c = 1), scaled so the largest value is
    p*. A single bump has width L/4; with c bumps each narrows to L/(4c).
    The literal mode uses p* * d_j / L with d_j the distance to the midpoint.
    Wall counts above ``cfg.k_max`` are capped. A subsegment with no
    intermediate cell yields no evidence even for delta k >= 1; its wall lies
    in an endpoint cell that the free rays already constrain.

    Args:
        sub: Subsegment with delta_k >= 0
        cfg: Mapper configuration

    Returns:
        WallEvidence with one value per intermediate cell; empty when the
        subsegment has no intermediate cell

    Raises:
        DomainError: If delta_k is negative
    """
    if sub.delta_k < 0:
        raise DomainError(f"negative delta_k {sub.delta_k} carries no wall evidence")
    m = sub.intermediate_count
    length = sub.length
    variance = cfg.base_variance * (max(m, 1) / cfg.reference_length) ** 2
    if m <= 0:
        if sub.delta_k > 0:
            logger.debug(f"subsegment {sub.start}->{sub.end} has no cell to hold a wall")
        return WallEvidence(mu=np.zeros(0), variance=variance)
    if sub.delta_k == 0:
        return WallEvidence(mu=np.zeros(m), variance=variance)

    walls = sub.delta_k if cfg.k_max is None else min(sub.delta_k, cfg.k_max)
    p_star = peak_probability(m)
    positions = np.arange(1, m + 1, dtype=np.float64)
    if cfg.wall_mode == WallMode.LITERAL:
        mu = p_star * np.abs(positions - length / 2.0) / length
    else:
        shape = _bumps(positions, length, walls)
        mu = p_star * shape / shape.max()
    return WallEvidence(mu=np.clip(mu, 0.0, 1.0), variance=variance)


def fuse(mu1: float, sigma1: float, mu2: float, sigma2: float) -> Tuple[float, float]:
    """Combine two estimates weighted by their uncertainties.

    mu = s1^2/(s1^2+s2^2) * mu2 + s2^2/(s1^2+s2^2) * mu1 and
    sigma^2 = (s1^-2 + s2^-2)^-1.

    Raises:
        DomainError: If either sigma is not a positive finite number
    """
    for name, s in (("sigma1", sigma1), ("sigma2", sigma2)):
        if not (s > 0 and math.isfinite(s)):
            raise DomainError(f"{name} must be positive, got {s}")
    v1 = sigma1 * sigma1
    v2 = sigma2 * sigma2
    total = v1 + v2
    mu = (v1 * mu2 + v2 * mu1) / total
    sigma = math.sqrt(1.0 / (1.0 / v1 + 1.0 / v2))
    return mu, sigma


def fuse_arrays(
    mu1: np.ndarray, var1: np.ndarray, mu2: np.ndarray, var2: np.ndarray
) -> Tuple[np.ndarray, np.ndarray]:
    """Elementwise ``fuse`` on variances instead of standard deviations."""
    if np.any(~(var1 > 0)) or np.any(~(var2 > 0)):
        raise DomainError("variances must be positive")
    total = var1 + var2
    mu = (var1 * mu2 + var2 * mu1) / total
    var = 1.0 / (1.0 / var1 + 1.0 / var2)
    return mu, var
