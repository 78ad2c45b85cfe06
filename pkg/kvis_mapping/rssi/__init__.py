# RSSI forward model, thresholds, classification and filtering

from .filters import filter_readings, sliding_filter
from .logs import RssiLog, read_rssi_log, write_rssi_log
from .model import path_loss, simulate_readings, simulate_rssi
from .thresholds import (
    RssiThresholds,
    classify_k,
    classify_many,
    fit_thresholds,
    kmeans_1d,
    read_thresholds,
    write_thresholds,
)

__all__ = [
    # Forward model
    "path_loss",
    "simulate_rssi",
    "simulate_readings",
    # Thresholds
    "RssiThresholds",
    "kmeans_1d",
    "fit_thresholds",
    "classify_k",
    "classify_many",
    "read_thresholds",
    "write_thresholds",
    # Filtering
    "sliding_filter",
    "filter_readings",
    # Logs
    "RssiLog",
    "read_rssi_log",
    "write_rssi_log",
]
