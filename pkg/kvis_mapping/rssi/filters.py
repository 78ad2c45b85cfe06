"""Sliding-window median filter for RSSI series."""

import logging
from typing import Sequence

import numpy as np
from numpy.lib.stride_tricks import sliding_window_view

from ..exceptions import ConfigError, DomainError

logger = logging.getLogger(__name__)


def sliding_filter(series: Sequence[float], window: int) -> np.ndarray:
    """Centered moving median; edges use the truncated window.

    Missing readings (NaN) are ignored inside each window and stay missing in
    the output.

    Args:
        series: RSSI values in dBm
        window: Odd window length >= 1

    Returns:
        Filtered series of the same length

    Raises:
        ConfigError: If window is even or < 1
    """
    if window < 1 or window % 2 == 0:
        raise ConfigError(f"filter window must be odd and >= 1, got {window}")
    x = np.asarray(series, dtype=np.float64).ravel()
    if x.size == 0 or window == 1:
        return x.copy()

    half = window // 2
    padded = np.pad(x, half, mode="constant", constant_values=np.nan)
    windows = sliding_window_view(padded, window)
    out = np.full(x.shape, np.nan)
    present = ~np.isnan(x)
    out[present] = np.nanmedian(windows[present], axis=1)
    return out


def filter_readings(readings: np.ndarray, window: int) -> np.ndarray:
    """Filter every router column of an (n_samples, n_routers) reading matrix."""
    readings = np.asarray(readings, dtype=np.float64)
    if readings.ndim != 2:
        raise DomainError(f"expected a 2-D reading matrix, got shape {readings.shape}")
    columns = [sliding_filter(readings[:, j], window) for j in range(readings.shape[1])]
    return np.column_stack(columns).reshape(readings.shape)
