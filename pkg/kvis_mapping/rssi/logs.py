"""RSSI log CSV: ``t,x,y,rssi_0,...,rssi_{n-1}``.

Times are seconds, positions meters in the map frame, readings dBm per
router. A missing reading is an empty field.
"""

import csv
import logging
import math
from dataclasses import dataclass
from pathlib import Path
from typing import List, Union

import numpy as np

from ..exceptions import DomainError, LoadError

logger = logging.getLogger(__name__)


@dataclass(eq=False)
class RssiLog:
    """Timestamped metric positions with per-router readings (NaN = missing)."""

    times: np.ndarray
    points: np.ndarray
    rssi: np.ndarray

    def __post_init__(self) -> None:
        self.times = np.asarray(self.times, dtype=np.float64).reshape(-1)
        self.points = np.asarray(self.points, dtype=np.float64).reshape(-1, 2)
        self.rssi = np.asarray(self.rssi, dtype=np.float64)
        if self.rssi.ndim == 1:
            self.rssi = self.rssi.reshape(-1, 1)
        n = self.times.size
        if self.points.shape[0] != n or self.rssi.shape[0] != n:
            raise DomainError(
                f"row count mismatch: {n} times, {self.points.shape[0]} points, "
                f"{self.rssi.shape[0]} reading rows"
            )

    @property
    def n_routers(self) -> int:
        return int(self.rssi.shape[1])

    def __len__(self) -> int:
        return int(self.times.size)


def _fmt(value: float) -> str:
    return "" if math.isnan(value) else f"{value:.6f}"


def write_rssi_log(log: RssiLog, path: Union[str, Path]) -> Path:
    """Write an RSSI log CSV."""
    path = Path(path)
    header = ["t", "x", "y"] + [f"rssi_{j}" for j in range(log.n_routers)]
    with path.open("w", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(header)
        for i in range(len(log)):
            row = [_fmt(log.times[i]), _fmt(log.points[i, 0]), _fmt(log.points[i, 1])]
            row.extend(_fmt(v) for v in log.rssi[i])
            writer.writerow(row)
    logger.debug(f"Wrote {len(log)} RSSI rows for {log.n_routers} routers to {path}")
    return path


def _parse(field: str) -> float:
    field = field.strip()
    return math.nan if field == "" else float(field)


def read_rssi_log(path: Union[str, Path]) -> RssiLog:
    """Read an RSSI log CSV.

    Raises:
        LoadError: If the file is missing, the header is wrong or a field is malformed
    """
    path = Path(path)
    try:
        with path.open(newline="") as fh:
            rows = list(csv.reader(fh))
    except OSError as e:
        raise LoadError(path, f"cannot read RSSI log: {e}") from e
    if not rows:
        raise LoadError(path, "empty RSSI log")

    header = [h.strip() for h in rows[0]]
    n_routers = len(header) - 3
    expected = ["t", "x", "y"] + [f"rssi_{j}" for j in range(n_routers)]
    if n_routers < 1 or header != expected:
        raise LoadError(path, f"expected header {','.join(expected)}, got {','.join(header)}")

    times: List[float] = []
    points: List[List[float]] = []
    readings: List[List[float]] = []
    for line_no, row in enumerate(rows[1:], start=2):
        if not row:
            continue
        if len(row) != len(header):
            raise LoadError(path, f"line {line_no}: expected {len(header)} fields, got {len(row)}")
        try:
            values = [_parse(v) for v in row]
        except ValueError as e:
            raise LoadError(path, f"line {line_no}: {e}") from e
        if any(math.isnan(v) for v in values[:3]):
            raise LoadError(path, f"line {line_no}: t, x and y are required")
        times.append(values[0])
        points.append(values[1:3])
        readings.append(values[3:])

    return RssiLog(
        times=np.array(times),
        points=np.array(points).reshape(-1, 2),
        rssi=np.array(readings).reshape(-1, n_routers),
    )
