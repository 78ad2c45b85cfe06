"""Unit tests for floorplans, belief maps, transforms and raster I/O."""

import numpy as np
import pytest
from PIL import Image

from kvis_mapping.exceptions import DomainError, FloorplanError, GridBoundsError, LoadError
from kvis_mapping.grid import (
    UNKNOWN,
    BeliefMap,
    Floorplan,
    bounding_box,
    cell_to_world,
    decode_belief,
    encode_belief,
    export_grayscale,
    export_wall_grid,
    floorplan_from_pixels,
    load_floorplan,
    plan_to_pixels,
    read_belief,
    read_grayscale,
    world_to_cell,
    write_grayscale,
)
from kvis_mapping.models import CellIndex, Rect, WorldPoint

from .helpers import TestDataFactory


class TestFloorplan:
    """Test Floorplan construction and queries."""

    def test_dimensions(self, wall_column_plan):
        """Test width, height and shape."""
        plan = TestDataFactory.wall_column_plan(width=7, height=4, columns=(3,))
        assert plan.width == 7
        assert plan.height == 4
        assert plan.shape == (4, 7)
        assert plan.is_wall((3, 2))
        assert not plan.is_wall((2, 2))

    def test_walls_are_read_only(self, wall_column_plan):
        """Test the wall grid cannot be mutated."""
        with pytest.raises(ValueError):
            wall_column_plan.walls[0, 0] = True

    def test_free_area(self):
        """Test free area uses the resolution squared."""
        plan = TestDataFactory.plan_from_rows(["..#", "..."], resolution=0.5)
        assert plan.free_area_m2 == pytest.approx(5 * 0.25)

    def test_free_cells_row_major(self):
        """Test free cell iteration order."""
        plan = TestDataFactory.plan_from_rows([".#", ".."])
        assert list(plan.free_cells()) == [CellIndex(0, 0), CellIndex(0, 1), CellIndex(1, 1)]

    def test_router_on_wall(self, wall_column_plan):
        """Test a router on a wall names its index."""
        with pytest.raises(FloorplanError, match=r"router 1 at \(5, 3\) is on a wall"):
            wall_column_plan.with_routers([(1, 1), (5, 3)])

    def test_router_outside(self, wall_column_plan):
        """Test a router outside the grid is rejected."""
        with pytest.raises(FloorplanError, match="router 0 .* outside"):
            wall_column_plan.with_routers([(10, 0)])

    @pytest.mark.parametrize("resolution", [0.0, -0.1, float("nan")])
    def test_bad_resolution(self, resolution):
        """Test the resolution must be positive and finite."""
        with pytest.raises(FloorplanError):
            Floorplan(walls=np.zeros((2, 2), dtype=bool), resolution=resolution)

    def test_empty_grid(self):
        """Test zero-area grids are rejected."""
        with pytest.raises(FloorplanError):
            Floorplan(walls=np.zeros((0, 3), dtype=bool), resolution=0.1)


class TestBeliefMap:
    """Test BeliefMap."""

    def test_unknown(self):
        """Test a fresh map is unknown everywhere with unset variance."""
        belief = BeliefMap.unknown(4, 3)
        assert belief.shape == (3, 4)
        assert np.all(belief.prob_free == UNKNOWN)
        assert np.all(np.isnan(belief.variance))
        assert not belief.known_mask().any()

    def test_masks(self):
        """Test known and free masks."""
        belief = BeliefMap.from_probabilities(np.array([[0.0, 0.5, 0.9]]))
        assert belief.known_mask().tolist() == [[True, False, True]]
        assert belief.free_mask().tolist() == [[False, False, True]]

    def test_rejects_out_of_range(self):
        """Test probabilities outside [0, 1]."""
        with pytest.raises(DomainError):
            BeliefMap.from_probabilities(np.array([[1.5]]))

    def test_copy_is_independent(self):
        """Test copy does not share buffers."""
        belief = BeliefMap.unknown(2, 2)
        clone = belief.copy()
        clone.prob_free[0, 0] = 1.0
        assert belief.prob_free[0, 0] == UNKNOWN


class TestTransforms:
    """Test coordinate transforms and bounding boxes."""

    def test_world_to_cell(self, wall_column_plan):
        """Test floor division by the resolution."""
        assert world_to_cell(WorldPoint(0.0, 0.0), wall_column_plan) == CellIndex(0, 0)
        assert world_to_cell(WorldPoint(0.25, 0.99), wall_column_plan) == CellIndex(2, 9)

    def test_world_to_cell_out_of_bounds(self, wall_column_plan):
        """Test points outside the metric extent."""
        with pytest.raises(GridBoundsError) as exc_info:
            world_to_cell(WorldPoint(1.0, 0.5), wall_column_plan)
        assert exc_info.value.axis == "x"
        with pytest.raises(GridBoundsError):
            world_to_cell(WorldPoint(0.5, -0.01), wall_column_plan)

    def test_cell_center_round_trip(self, wall_column_plan):
        """Test cell centers map back to their cell."""
        for cell in [CellIndex(0, 0), CellIndex(9, 9), CellIndex(4, 7)]:
            assert world_to_cell(cell_to_world(cell, wall_column_plan), wall_column_plan) == cell

    def test_bounding_box(self):
        """Test inclusive bounds."""
        box = bounding_box([(3, 4), (1, 7), (5, 5)])
        assert box == Rect(CellIndex(1, 4), CellIndex(5, 7))
        assert box.width == 5
        assert box.height == 4
        assert box.contains(CellIndex(1, 7))
        assert not box.contains(CellIndex(0, 7))

    def test_bounding_box_empty(self):
        """Test an empty point set."""
        with pytest.raises(DomainError):
            bounding_box([])


class TestRasterIO:
    """Test grayscale import and export."""

    def test_encoding(self):
        """Test free, wall and unknown intensities."""
        belief = BeliefMap.from_probabilities(np.array([[1.0, 0.0, 0.5, 0.6]]))
        assert encode_belief(belief).tolist() == [[255, 0, 128, 153]]

    def test_decode_unknown_band(self):
        """Test 127 and 128 both decode to exactly unknown."""
        belief = decode_belief(np.array([[127, 128, 255, 0]], dtype=np.uint8))
        assert belief.prob_free[0, 0] == UNKNOWN
        assert belief.prob_free[0, 1] == UNKNOWN
        assert belief.prob_free[0, 2] == 1.0
        assert belief.prob_free[0, 3] == 0.0

    @pytest.mark.parametrize("suffix", [".pgm", ".png"])
    def test_belief_file_round_trip(self, tmp_path, suffix):
        """Test export followed by import preserves the ternary classes."""
        belief = BeliefMap.from_probabilities(np.array([[1.0, 0.0], [0.5, 0.8]]))
        path = export_grayscale(belief, tmp_path / f"map{suffix}")
        loaded = read_belief(path)
        assert loaded.known_mask().tolist() == belief.known_mask().tolist()
        assert loaded.free_mask().tolist() == belief.free_mask().tolist()

    def test_ascii_pgm(self, tmp_path):
        """Test plain P2 output is readable."""
        pixels = np.array([[0, 127, 255]], dtype=np.uint8)
        path = write_grayscale(pixels, tmp_path / "plain.pgm", ascii_pgm=True)
        assert path.read_text().startswith("P2\n3 1\n255\n")
        assert read_grayscale(path).tolist() == pixels.tolist()

    def test_read_rejects_color(self, tmp_path):
        """Test RGB images are not floorplans."""
        path = tmp_path / "color.png"
        Image.new("RGB", (4, 4), (255, 255, 255)).save(path)
        with pytest.raises(LoadError, match="grayscale"):
            read_grayscale(path)

    def test_read_missing_file(self, tmp_path):
        """Test a missing raster raises LoadError with the path."""
        with pytest.raises(LoadError) as exc_info:
            read_grayscale(tmp_path / "absent.pgm")
        assert "absent.pgm" in str(exc_info.value)

    def test_wall_grid_export(self, tmp_path):
        """Test the three-level wall grid."""
        walls = np.array([[True, False, False]])
        known = np.array([[True, True, False]])
        path = export_wall_grid(walls, tmp_path / "walls.pgm", known=known)
        assert read_grayscale(path).tolist() == [[0, 255, 127]]


class TestLoadFloorplan:
    """Test floorplan loading."""

    def test_threshold(self):
        """Test bright pixels are free; dark and mid-gray pixels are walls."""
        pixels = np.array([[255, 200, 130, 0]], dtype=np.uint8)
        plan = floorplan_from_pixels(pixels, 0.1)
        assert plan.walls.tolist() == [[False, False, True, True]]

    def test_round_trip(self, tmp_path, wall_column_plan):
        """Test a plan written as an image loads back identically."""
        path = write_grayscale(plan_to_pixels(wall_column_plan), tmp_path / "plan.png")
        plan = load_floorplan(path, 0.1, routers=[(2, 2)])
        assert np.array_equal(plan.walls, wall_column_plan.walls)
        assert plan.routers == (CellIndex(2, 2),)

    def test_no_free_cell(self, tmp_path):
        """Test an all-wall raster."""
        path = write_grayscale(np.zeros((3, 3), dtype=np.uint8), tmp_path / "black.pgm")
        with pytest.raises(LoadError, match="no free cell"):
            load_floorplan(path, 0.1)

    def test_router_on_wall(self, tmp_path, wall_column_plan):
        """Test an invalid router surfaces as LoadError naming the router."""
        path = write_grayscale(plan_to_pixels(wall_column_plan), tmp_path / "plan.pgm")
        with pytest.raises(LoadError, match="router 0"):
            load_floorplan(path, 0.1, routers=[(5, 5)])
