# k-visibility occupancy mapping
# Occupancy grids from WiFi RSSI via inverse k-visibility

__version__ = "0.1.0"
__license__ = "MIT"

from .config import ExperimentConfig, MapperConfig, RssiModelParams, Settings, get_settings
from .exceptions import (
    ConfigError,
    DegenerateInputError,
    DomainError,
    FloorplanError,
    GridBoundsError,
    GridError,
    InconsistentFieldError,
    KVisMappingError,
    LoadError,
    MetricsError,
    PipelineStageError,
    ThresholdError,
    UndefinedScoreError,
)
from .grid import BeliefMap, Floorplan, export_grayscale, load_floorplan
from .mapping import SparseMapper, dense_inverse, run_mapper
from .metrics import evaluate, iou, k_accuracy, mse
from .models import CellIndex, EvalReport, WallMode
from .pipeline import PipelineResult, run_pipeline
from .raycast import KField, count_wall_crossings, k_field, traverse
from .rssi import RssiThresholds, classify_k, fit_thresholds, kmeans_1d

__all__ = [
    # Configuration
    "Settings",
    "get_settings",
    "ExperimentConfig",
    "MapperConfig",
    "RssiModelParams",
    # Types
    "CellIndex",
    "Floorplan",
    "BeliefMap",
    "KField",
    "RssiThresholds",
    "EvalReport",
    "WallMode",
    # Operations
    "load_floorplan",
    "export_grayscale",
    "traverse",
    "count_wall_crossings",
    "k_field",
    "kmeans_1d",
    "fit_thresholds",
    "classify_k",
    "dense_inverse",
    "SparseMapper",
    "run_mapper",
    "k_accuracy",
    "iou",
    "mse",
    "evaluate",
    "run_pipeline",
    "PipelineResult",
    # Exceptions
    "KVisMappingError",
    "GridError",
    "GridBoundsError",
    "FloorplanError",
    "DomainError",
    "InconsistentFieldError",
    "DegenerateInputError",
    "ThresholdError",
    "ConfigError",
    "MetricsError",
    "UndefinedScoreError",
    "LoadError",
    "PipelineStageError",
]
