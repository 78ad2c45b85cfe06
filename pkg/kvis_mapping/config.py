"""Configuration module for the k-visibility mapping toolkit.

Two layers of configuration exist:

1. ``Settings`` - process-level knobs read from ``KVIS_``-prefixed environment
   variables (and a ``.env`` file when python-dotenv is installed).
2. ``ExperimentConfig`` - one JSON file per experiment describing the floorplan,
   routers, trajectory, RSSI model, thresholds and mapper parameters.

Example experiment file::

    {
        "scene": {"kind": "single_wall", "width": 30, "height": 21},
        "resolution": 0.1,
        "routers": [[7, 10]],
        "trajectory": {"pattern": "perimeter"},
        "rssi": {"noise_sigma": 0.0},
        "thresholds": {"source": "fit", "k_max": 1},
        "mapper": {"wall_mode": "gaussian-midpoint"},
        "output_dir": "runs/single_wall",
        "seed": 7
    }
"""

import json
import logging
from pathlib import Path
from typing import Any, Dict, List, Optional, Tuple

from pydantic import BaseModel, Field, ValidationError, field_validator, model_validator
from pydantic_settings import BaseSettings, SettingsConfigDict

from .exceptions import ConfigError
from .models import SceneKind, ThresholdSource, TrajectoryPattern, WallMode

# Optional .env loading - only if python-dotenv is available
try:
    from dotenv import load_dotenv

    load_dotenv()
except ImportError:
    pass

logger = logging.getLogger(__name__)

LOG_FORMAT = "%(asctime)s - %(name)s - %(levelname)s - %(message)s"


class Settings(BaseSettings):
    """Process-level settings.

    Read from environment variables with the ``KVIS_`` prefix, e.g.
    ``KVIS_LOG_LEVEL=DEBUG`` or ``KVIS_OUTPUT_DIR=/tmp/runs``.
    """

    model_config = SettingsConfigDict(env_prefix="KVIS_", extra="ignore")

    log_level: str = Field(default="INFO", description="Root log level for the CLI")
    debug: bool = Field(default=False, description="Force DEBUG logging")
    output_dir: Path = Field(
        default=Path("runs"), description="Output directory when an experiment names none"
    )


class RssiModelParams(BaseModel):
    """Log-distance path-loss model with a per-wall attenuation term."""

    p0: float = Field(default=-40.0, description="RSSI at reference distance d0 (dBm)")
    d0: float = Field(default=1.0, gt=0, description="Reference distance (m)")
    path_loss_exponent: float = Field(default=2.2, gt=0, description="Path-loss exponent n")
    wall_attenuation: float = Field(default=8.0, ge=0, description="Loss per wall crossed (dB)")
    noise_sigma: float = Field(default=0.0, ge=0, description="Gaussian noise std (dB)")
    seed: Optional[int] = Field(
        default=None, ge=0, description="Noise RNG seed; falls back to the experiment seed"
    )


class MapperConfig(BaseModel):
    """Sparse mapper parameters."""

    sigma_step: float = Field(
        default=0.1, gt=0, le=0.5, description="Free-probability increment per observation"
    )
    base_variance: float = Field(default=1.0, gt=0, description="Initial observation variance")
    wall_mode: WallMode = Field(
        default=WallMode.GAUSSIAN_MIDPOINT, description="Wall distribution along a subsegment"
    )
    k_max: Optional[int] = Field(
        default=None, ge=1, description="Max wall count; taken from the thresholds when unset"
    )
    reference_length: float = Field(
        default=10.0, gt=0, description="Subsegment length (cells) at which variance = base"
    )
    step_bound: int = Field(
        default=2, ge=1, description="Max pose gap (cells, Chebyshev) inside one trajectory run"
    )
    refine_endpoints: bool = Field(
        default=True, description="Move ray endpoints to on-ray trajectory intersections"
    )
    min_run_length: int = Field(
        default=1, ge=1, description="Shorter trajectory runs are not used as ray intersections"
    )


class ThresholdConfig(BaseModel):
    """How RSSI bounds are obtained."""

    source: ThresholdSource = Field(default=ThresholdSource.FIT)
    k_max: int = Field(default=2, ge=1, description="Max wall count K")
    bounds: Optional[List[float]] = Field(
        default=None, description="Explicit bounds t_1 > ... > t_K (dBm)"
    )
    per_router: bool = Field(default=True, description="Fit one threshold set per router")
    filter_window: int = Field(default=5, ge=1, description="Median filter window (odd)")

    @field_validator("filter_window")
    @classmethod
    def _odd_window(cls, value: int) -> int:
        if value % 2 == 0:
            raise ValueError(f"filter_window must be odd, got {value}")
        return value

    @model_validator(mode="after")
    def _explicit_bounds(self) -> "ThresholdConfig":
        if self.source == ThresholdSource.EXPLICIT:
            if not self.bounds:
                raise ValueError("explicit thresholds require bounds")
            if len(self.bounds) != self.k_max:
                raise ValueError(f"expected {self.k_max} bounds, got {len(self.bounds)}")
        return self


class TrajectoryConfig(BaseModel):
    """Trajectory source: a CSV file or a generated pattern."""

    pattern: Optional[TrajectoryPattern] = Field(default=TrajectoryPattern.PERIMETER)
    path: Optional[Path] = Field(default=None, description="Trajectory/RSSI CSV")
    sample_period: float = Field(default=1.0, gt=0, description="Seconds between samples")

    @model_validator(mode="after")
    def _one_source(self) -> "TrajectoryConfig":
        if self.path is not None:
            self.pattern = None
        elif self.pattern is None:
            raise ValueError("trajectory needs a pattern or a path")
        return self


class SceneConfig(BaseModel):
    """Parameters for a built-in synthetic floorplan."""

    kind: SceneKind
    width: int = Field(default=20, ge=3)
    height: int = Field(default=20, ge=3)
    n_rooms: int = Field(default=2, ge=1)
    wall_thickness: int = Field(default=1, ge=1)
    door_width: int = Field(default=0, ge=0)
    wall_density: float = Field(default=0.1, ge=0, lt=1, description="Random scenes only")


class ExperimentConfig(BaseModel):
    """Complete description of one mapping experiment."""

    floorplan: Optional[Path] = Field(default=None, description="PGM/PNG ground-truth plan")
    scene: Optional[SceneConfig] = Field(default=None, description="Built-in synthetic plan")
    resolution: float = Field(gt=0, description="Meters per cell")
    routers: List[Tuple[int, int]] = Field(min_length=1, description="Router cells (x, y)")
    trajectory: TrajectoryConfig = Field(default_factory=TrajectoryConfig)
    rssi: RssiModelParams = Field(default_factory=RssiModelParams)
    thresholds: ThresholdConfig = Field(default_factory=ThresholdConfig)
    mapper: MapperConfig = Field(default_factory=MapperConfig)
    output_dir: Optional[Path] = Field(default=None)
    seed: int = Field(ge=0, description="Master seed; mandatory for reproducibility")

    @model_validator(mode="after")
    def _one_plan_source(self) -> "ExperimentConfig":
        if (self.floorplan is None) == (self.scene is None):
            raise ValueError("exactly one of floorplan or scene must be given")
        return self

    @classmethod
    def from_dict(cls, data: Dict[str, Any], base_dir: Optional[Path] = None) -> "ExperimentConfig":
        """Validate a config mapping, resolving relative paths against ``base_dir``.

        Raises:
            ConfigError: If validation fails or a referenced file is missing
        """
        try:
            config = cls.model_validate(data)
        except ValidationError as e:
            raise ConfigError(f"invalid experiment config: {e}") from e

        if base_dir is not None:
            if config.floorplan is not None and not config.floorplan.is_absolute():
                config.floorplan = base_dir / config.floorplan
            path = config.trajectory.path
            if path is not None and not path.is_absolute():
                config.trajectory.path = base_dir / path

        inputs = (("floorplan", config.floorplan), ("trajectory", config.trajectory.path))
        for label, path in inputs:
            if path is not None and not path.is_file():
                raise ConfigError(f"{label} file not found: {path}")
        return config

    @classmethod
    def load(cls, path: Path) -> "ExperimentConfig":
        """Load an experiment JSON file.

        Args:
            path: Path to the JSON config

        Returns:
            Validated ExperimentConfig

        Raises:
            ConfigError: If the file is unreadable or invalid
        """
        path = Path(path)
        try:
            data = json.loads(path.read_text())
        except (OSError, json.JSONDecodeError) as e:
            raise ConfigError(f"cannot read experiment config {path}: {e}") from e
        if not isinstance(data, dict):
            raise ConfigError(f"experiment config {path} must be a JSON object")
        logger.debug(f"Loaded experiment config from {path}")
        return cls.from_dict(data, base_dir=path.parent)


# Global settings instance; created lazily from the environment
_settings: Optional[Settings] = None


def get_settings() -> Settings:
    """Get the global settings, reading the environment on first use."""
    global _settings
    if _settings is None:
        _settings = Settings()
    return _settings


def set_settings(settings: Optional[Settings]) -> None:
    """Replace the global settings (None re-reads the environment on next access)."""
    global _settings
    _settings = settings


def configure_logging(settings: Settings, verbose: bool = False) -> None:
    """Configure root logging for command-line use."""
    level = logging.DEBUG if (verbose or settings.debug) else settings.log_level.upper()
    logging.basicConfig(level=level, format=LOG_FORMAT, force=True)
