"""Log-distance path-loss RSSI forward model with per-wall attenuation."""

import logging
import math
from typing import Sequence

import numpy as np

from ..config import RssiModelParams
from ..exceptions import DomainError
from ..grid.floorplan import Floorplan
from ..raycast.traversal import count_wall_crossings, crossing_counter

logger = logging.getLogger(__name__)


def path_loss(distance_m: float, walls: int, params: RssiModelParams) -> float:
    """Noise-free RSSI (dBm) at a metric distance behind a number of walls."""
    d = max(distance_m, params.d0)
    return (
        params.p0
        - 10.0 * params.path_loss_exponent * math.log10(d / params.d0)
        - params.wall_attenuation * walls
    )


def _distance_m(plan: Floorplan, a: Sequence[int], b: Sequence[int]) -> float:
    return math.hypot(a[0] - b[0], a[1] - b[1]) * plan.resolution


def simulate_rssi(
    plan: Floorplan,
    router: Sequence[int],
    pose: Sequence[int],
    params: RssiModelParams,
    rng: np.random.Generator,
) -> float:
    """Simulate one RSSI reading.

    Args:
        plan: Ground-truth floorplan
        router: Router cell
        pose: Receiver cell
        params: Path-loss parameters
        rng: Noise source; untouched when noise_sigma is 0

    Returns:
        RSSI in dBm

    Raises:
        DomainError: If router or pose is a wall cell
    """
    walls = count_wall_crossings(plan, router, pose)
    rssi = path_loss(_distance_m(plan, router, pose), walls, params)
    if params.noise_sigma > 0:
        rssi += float(rng.normal(0.0, params.noise_sigma))
    return rssi


def simulate_readings(
    plan: Floorplan,
    poses: Sequence[Sequence[int]],
    params: RssiModelParams,
    rng: np.random.Generator,
) -> np.ndarray:
    """Simulate readings from every router of the plan along a pose sequence.

    Noise is drawn sample by sample, router by router, so a fixed seed gives
    a fixed matrix.

    Returns:
        Array of shape (len(poses), len(plan.routers)) in dBm

    Raises:
        DomainError: If a pose is a wall cell
    """
    count = crossing_counter(plan)
    readings = np.empty((len(poses), len(plan.routers)), dtype=np.float64)
    for i, pose in enumerate(poses):
        if not plan.in_bounds(pose) or plan.is_wall(pose):
            raise DomainError(f"pose {i} at {tuple(pose)} is not a free cell")
        for j, router in enumerate(plan.routers):
            readings[i, j] = path_loss(_distance_m(plan, router, pose), count(router, pose), params)
    if params.noise_sigma > 0:
        readings += rng.normal(0.0, params.noise_sigma, size=readings.shape)
    logger.debug(
        f"Simulated {readings.shape[0]} samples for {readings.shape[1]} routers "
        f"(noise sigma {params.noise_sigma} dB)"
    )
    return readings
