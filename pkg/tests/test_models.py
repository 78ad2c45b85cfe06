"""Unit tests for value types, enums and the exception hierarchy."""

import pytest

from kvis_mapping.exceptions import (
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
from kvis_mapping.grid.floorplan import bounding_box
from kvis_mapping.models import (
    CellIndex,
    MseScale,
    Rect,
    SceneKind,
    ThresholdSource,
    TrajectoryPattern,
    WallMode,
    WorldPoint,
)


class TestEnums:
    """Test all enum classes."""

    def test_wall_mode_enum(self):
        """Test WallMode values."""
        assert WallMode.GAUSSIAN_MIDPOINT == "gaussian-midpoint"
        assert WallMode("literal-eq4") is WallMode.LITERAL

    def test_trajectory_pattern_enum(self):
        """Test TrajectoryPattern values."""
        assert TrajectoryPattern.PERIMETER == "perimeter"
        assert TrajectoryPattern.ROOMS == "rooms"

    def test_threshold_source_enum(self):
        """Test ThresholdSource values."""
        assert ThresholdSource.FIT == "fit"
        assert ThresholdSource.EXPLICIT == "explicit"

    def test_scene_kind_enum(self):
        """Test SceneKind values."""
        assert {k.value for k in SceneKind} == {
            "empty_room",
            "single_wall",
            "room_row",
            "nested_rooms",
            "random",
        }

    def test_all_values_are_strings(self):
        """Test every enum serializes as a string."""
        for enum in (WallMode, TrajectoryPattern, ThresholdSource, SceneKind, MseScale):
            for member in enum:
                assert isinstance(member.value, str)


class TestValueTypes:
    """Test coordinate tuples and rectangles."""

    def test_cell_index(self):
        """Test CellIndex behaves as an (x, y) tuple."""
        cell = CellIndex(3, 4)
        assert cell == (3, 4)
        assert (cell.x, cell.y) == (3, 4)
        assert {cell: 1}[(3, 4)] == 1

    def test_world_point(self):
        """Test WorldPoint fields."""
        point = WorldPoint(0.25, 1.5)
        assert point.x == 0.25 and point.y == 1.5

    def test_rect(self):
        """Test inclusive extents and membership."""
        rect = Rect(CellIndex(1, 2), CellIndex(4, 3))
        assert (rect.width, rect.height) == (4, 2)
        assert rect.contains(CellIndex(4, 3))
        assert not rect.contains(CellIndex(0, 2))

    def test_bounding_box(self):
        """Test the smallest rectangle around a set of cells."""
        box = bounding_box([(3, 1), (5, 7), (4, 4)])
        assert box == Rect(CellIndex(3, 1), CellIndex(5, 7))
        with pytest.raises(DomainError):
            bounding_box([])


class TestExceptions:
    """Test the exception hierarchy and messages."""

    @pytest.mark.parametrize(
        "error",
        [
            GridError,
            FloorplanError,
            DomainError,
            InconsistentFieldError,
            DegenerateInputError,
            ThresholdError,
            ConfigError,
            MetricsError,
            UndefinedScoreError,
        ],
    )
    def test_base_class(self, error):
        """Test every error derives from the package base."""
        assert issubclass(error, KVisMappingError)

    def test_grouping(self):
        """Test intermediate base classes."""
        assert issubclass(GridBoundsError, GridError)
        assert issubclass(FloorplanError, GridError)
        assert issubclass(UndefinedScoreError, MetricsError)

    def test_grid_bounds_error(self):
        """Test the axis, value and limit are kept."""
        error = GridBoundsError("x", 12.5, 10)
        assert (error.axis, error.value, error.limit) == ("x", 12.5, 10)
        assert "x coordinate 12.5" in str(error)

    def test_load_error(self):
        """Test the path prefixes the message."""
        error = LoadError("maps/a.pgm", "bad header")
        assert str(error) == "maps/a.pgm: bad header"
        assert error.reason == "bad header"

    def test_pipeline_stage_error(self):
        """Test the stage and cause are kept."""
        cause = ConfigError("seed missing")
        error = PipelineStageError("fit", cause)
        assert error.stage == "fit"
        assert error.cause is cause
        assert str(error) == "fit stage failed: seed missing"
