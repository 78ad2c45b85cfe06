"""Core value types and report models for k-visibility mapping."""

import math
from enum import Enum
from typing import NamedTuple, Optional

from pydantic import BaseModel, Field, model_validator


# ============================================================================
# Enums
# ============================================================================


class WallMode(str, Enum):
    """Shape of the per-cell wall distribution along a subsegment."""

    GAUSSIAN_MIDPOINT = "gaussian-midpoint"
    LITERAL = "literal-eq4"


class TrajectoryPattern(str, Enum):
    """Generated trajectory patterns."""

    PERIMETER = "perimeter"
    ROOMS = "rooms"


class ThresholdSource(str, Enum):
    """Where RSSI bounds come from."""

    FIT = "fit"
    EXPLICIT = "explicit"


class MseScale(str, Enum):
    """Intensity scale the MSE is reported on."""

    NORMALIZED = "normalized"
    RAW = "raw"


class SceneKind(str, Enum):
    """Built-in synthetic floorplans."""

    EMPTY_ROOM = "empty_room"
    SINGLE_WALL = "single_wall"
    ROOM_ROW = "room_row"
    NESTED_ROOMS = "nested_rooms"
    RANDOM = "random"


# ============================================================================
# Grid coordinates
# ============================================================================


class CellIndex(NamedTuple):
    """Integer cell coordinates; x is the column, y the row (y grows downward)."""

    x: int
    y: int


class WorldPoint(NamedTuple):
    """Metric coordinates in the map frame."""

    x: float
    y: float


class Rect(NamedTuple):
    """Inclusive axis-aligned cell rectangle."""

    min: CellIndex
    max: CellIndex

    @property
    def width(self) -> int:
        return self.max.x - self.min.x + 1

    @property
    def height(self) -> int:
        return self.max.y - self.min.y + 1

    def contains(self, cell: CellIndex) -> bool:
        return self.min.x <= cell.x <= self.max.x and self.min.y <= cell.y <= self.max.y


# ============================================================================
# Reports
# ============================================================================


class EvalReport(BaseModel):
    """Evaluation of one estimated map against its ground-truth floorplan.

    Field order follows the rows of the printed comparison table.
    """

    label: str = Field(default="", description="Column title in multi-run tables")
    area_m2: float = Field(ge=0, description="Free area of the ground-truth plan in m^2")
    n_routers: int = Field(ge=1, description="Number of routers")
    n_points: int = Field(ge=0, description="Number of evaluated trajectory samples")
    k_true: int = Field(ge=0, description="Samples whose predicted k matches ground truth")
    k_false: int = Field(ge=0, description="Samples whose predicted k is wrong")
    k_accuracy_pct: float = Field(ge=0, le=100, description="100 * k_true / n_points")
    iou: Optional[float] = Field(
        default=None, ge=0, le=1, description="Masked free-space IOU, None when undefined"
    )
    mse: float = Field(ge=0, description="Mean squared intensity error, normalized scale")
    mse_raw: float = Field(ge=0, description="Mean squared intensity error, 8-bit scale")
    free_ray_wall_hits: Optional[int] = Field(
        default=None, ge=0, description="Cells on k=0 rays that are ground-truth walls"
    )

    @model_validator(mode="after")
    def _check_counts(self) -> "EvalReport":
        if self.k_true + self.k_false != self.n_points:
            raise ValueError(
                f"k_true + k_false ({self.k_true} + {self.k_false}) != n_points ({self.n_points})"
            )
        if self.n_points > 0:
            expected = 100.0 * self.k_true / self.n_points
            if not math.isclose(self.k_accuracy_pct, expected, rel_tol=1e-9, abs_tol=1e-9):
                raise ValueError(
                    f"k_accuracy_pct {self.k_accuracy_pct} != 100 * {self.k_true} / {self.n_points}"
                )
        return self
