"""Test fixtures and configuration for k-visibility mapping tests."""

import json
from pathlib import Path
from typing import Any, Callable, Dict, Generator

import numpy as np
import pytest

from kvis_mapping.config import MapperConfig, RssiModelParams, Settings, set_settings
from kvis_mapping.grid.floorplan import Floorplan
from kvis_mapping.simulation.scenes import empty_room, nested_rooms, single_wall

from .helpers import TestDataFactory


# Settings isolation
@pytest.fixture(autouse=True)
def clean_settings(tmp_path: Path) -> Generator[Settings, None, None]:
    """Fresh settings per test with outputs under the test's tmp dir."""
    settings = Settings(output_dir=tmp_path / "runs")
    set_settings(settings)
    yield settings
    set_settings(None)


@pytest.fixture
def rng() -> np.random.Generator:
    return np.random.default_rng(1234)


# Plan Fixtures
@pytest.fixture
def wall_column_plan() -> Floorplan:
    """10x10 open plan with one wall column at x=5."""
    return TestDataFactory.wall_column_plan()


@pytest.fixture
def empty_room_plan() -> Floorplan:
    """12x10 room with 1-cell outer walls and a centered router."""
    return Floorplan(walls=empty_room(12, 10), resolution=0.1, routers=((6, 5),))


@pytest.fixture
def single_wall_plan() -> Floorplan:
    """21x11 bordered plan split by a wall column at x=10."""
    return Floorplan(walls=single_wall(21, 11, wall_x=10), resolution=0.1, routers=((5, 5),))


@pytest.fixture
def nested_plan() -> Floorplan:
    """20x20 plan with a closed room inside, router in the inner room."""
    return Floorplan(walls=nested_rooms(20, 20, inset=5), resolution=0.1, routers=((10, 10),))


# Config Fixtures
@pytest.fixture
def mapper_config() -> MapperConfig:
    return MapperConfig()


@pytest.fixture
def noiseless_params() -> RssiModelParams:
    return RssiModelParams(noise_sigma=0.0)


@pytest.fixture
def write_experiment(tmp_path: Path) -> Callable[..., Path]:
    """Write an experiment JSON into tmp_path and return its path."""

    def _write(name: str = "experiment.json", **overrides: Any) -> Path:
        data: Dict[str, Any] = TestDataFactory.experiment(**overrides)
        path = tmp_path / name
        path.write_text(json.dumps(data, indent=2))
        return path

    return _write
