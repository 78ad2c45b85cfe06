"""End-to-end experiment pipeline: simulate, filter, fit, classify, map, evaluate.

Each stage is a plain function so the CLI can run stages separately on the
files the previous stage wrote. ``run_pipeline`` chains them, stages every
artifact in a private directory, and only moves files into the output
directory once all stages succeeded.
"""

import logging
import os
import shutil
import tempfile
from dataclasses import dataclass, field
from pathlib import Path
from typing import Callable, Dict, List, Optional, Tuple, TypeVar

import numpy as np

from .config import ExperimentConfig, get_settings
from .exceptions import ConfigError, KVisMappingError, PipelineStageError
from .grid.floorplan import BeliefMap, Floorplan
from .grid.imaging import export_grayscale, load_floorplan
from .mapping.sparse import MappingResult, SparseMapper
from .mapping.trajectory import NO_K, Trajectory, focused_k
from .metrics.report import evaluate, write_report
from .models import CellIndex, EvalReport, ThresholdSource
from .raycast.kfield import k_field
from .raycast.traversal import crossing_counter
from .rssi.filters import filter_readings
from .rssi.logs import read_rssi_log, write_rssi_log
from .rssi.model import simulate_readings
from .rssi.thresholds import RssiThresholds, fit_thresholds, write_thresholds
from .simulation.scenes import build_scene
from .simulation.trajectories import generate_trajectory

logger = logging.getLogger(__name__)

T = TypeVar("T")

BELIEF_MAP_FILE = "belief_map.pgm"
TRAJECTORY_FILE = "trajectory.csv"
THRESHOLDS_FILE = "thresholds.json"
KFIELD_FILE = "kfield_router{index}.csv"


@dataclass
class PipelineResult:
    """Everything one pipeline run produced."""

    plan: Floorplan
    trajectory: Trajectory
    thresholds: List[RssiThresholds]
    mapping: MappingResult
    report: EvalReport
    files: Dict[str, Path] = field(default_factory=dict)

    @property
    def belief(self) -> BeliefMap:
        return self.mapping.belief


def run_stage(stage: str, fn: Callable[[], T]) -> T:
    """Run one stage, wrapping any failure in PipelineStageError."""
    logger.info(f"Stage {stage}")
    try:
        return fn()
    except PipelineStageError:
        raise
    except (KVisMappingError, OSError, ValueError) as e:
        logger.error(f"{stage} stage failed: {e}")
        raise PipelineStageError(stage, e) from e


# ============================================================================
# Stages
# ============================================================================


def build_floorplan(config: ExperimentConfig) -> Floorplan:
    """Load or generate the ground-truth plan and attach the routers.

    Raises:
        LoadError: If the floorplan file is invalid
        FloorplanError: If a router is outside the plan or on a wall
    """
    if config.floorplan is not None:
        return load_floorplan(config.floorplan, config.resolution, config.routers)
    assert config.scene is not None
    walls = build_scene(config.scene, np.random.default_rng(config.seed))
    routers = tuple(CellIndex(x, y) for x, y in config.routers)
    return Floorplan(walls=walls, resolution=config.resolution, routers=routers)


def prepare_trajectory(config: ExperimentConfig, plan: Floorplan) -> Trajectory:
    """Poses from the configured CSV or generated pattern; logged readings are kept."""
    source = config.trajectory
    if source.path is not None:
        log = read_rssi_log(source.path)
        if log.n_routers != len(plan.routers):
            raise ConfigError(
                f"{source.path} has readings for {log.n_routers} routers, "
                f"config names {len(plan.routers)}"
            )
        return Trajectory.from_log(log, plan)
    assert source.pattern is not None
    poses = generate_trajectory(plan, source.pattern, config.seed)
    return Trajectory.from_poses(poses, source.sample_period)


def has_readings(traj: Trajectory) -> bool:
    return len(traj) > 0 and not np.all(np.isnan(traj.rssi_matrix()))


def simulate_trajectory(plan: Floorplan, traj: Trajectory, config: ExperimentConfig) -> Trajectory:
    """Attach simulated readings from every router to each pose."""
    params = config.rssi
    seed = params.seed if params.seed is not None else config.seed
    readings = simulate_readings(plan, traj.poses, params, np.random.default_rng(seed))
    return traj.with_rssi(readings)


def filtered(traj: Trajectory, window: int) -> Trajectory:
    """Median-filter every router's reading series."""
    if len(traj) == 0:
        return traj
    return traj.with_rssi(filter_readings(traj.rssi_matrix(), window))


def derive_thresholds(traj: Trajectory, config: ExperimentConfig) -> List[RssiThresholds]:
    """Fit or load one threshold set per router from (filtered) readings."""
    cfg = config.thresholds
    n_routers = len(config.routers)
    if cfg.source == ThresholdSource.EXPLICIT:
        assert cfg.bounds is not None
        return [RssiThresholds.explicit(cfg.bounds)] * n_routers
    readings = traj.rssi_matrix()
    if cfg.per_router:
        sets = []
        for j in range(n_routers):
            column = readings[:, j]
            sets.append(fit_thresholds(column[~np.isnan(column)], cfg.k_max, config.seed))
        return sets
    pooled = readings[~np.isnan(readings)]
    return [fit_thresholds(pooled, cfg.k_max, config.seed)] * n_routers


def map_trajectory(
    traj: Trajectory, plan: Floorplan, thresholds: List[RssiThresholds], config: ExperimentConfig
) -> MappingResult:
    """Run the sparse mapper on a classified trajectory."""
    cfg = config.mapper
    if cfg.k_max is None:
        cfg = cfg.model_copy(update={"k_max": max(t.k_max for t in thresholds)})
    return SparseMapper(plan.width, plan.height, plan.routers, cfg).run(traj)


def k_pairs(traj: Trajectory, plan: Floorplan) -> Tuple[List[int], List[int]]:
    """Predicted and true k of the focused router at every sample that has one."""
    count = crossing_counter(plan)
    est: List[int] = []
    gt: List[int] = []
    for sample, (j, k) in zip(traj, focused_k(traj)):
        if j is None or k == NO_K:
            continue
        est.append(k)
        gt.append(count(plan.routers[j], sample.pose))
    return est, gt


def evaluate_run(
    traj: Trajectory,
    plan: Floorplan,
    belief: BeliefMap,
    label: str = "",
    free_ray_wall_hits: Optional[int] = None,
) -> EvalReport:
    est, gt = k_pairs(traj, plan)
    return evaluate(belief, plan, est, gt, label=label, free_ray_wall_hits=free_ray_wall_hits)


# ============================================================================
# Full run
# ============================================================================


def resolve_output_dir(config: ExperimentConfig, output_dir: Optional[Path] = None) -> Path:
    if output_dir is not None:
        return Path(output_dir)
    if config.output_dir is not None:
        return config.output_dir
    return get_settings().output_dir


def run_pipeline(
    config: ExperimentConfig, output_dir: Optional[Path] = None, label: str = ""
) -> PipelineResult:
    """Run every stage and write the map, k-fields, trajectory, thresholds and report.

    Args:
        config: Validated experiment configuration
        output_dir: Overrides the configured output directory
        label: Column title for the report table

    Returns:
        PipelineResult with the written file paths

    Raises:
        PipelineStageError: If any stage fails; nothing is left in the output directory
    """
    out = resolve_output_dir(config, output_dir)
    plan = run_stage("load", lambda: build_floorplan(config))
    traj = run_stage("trajectory", lambda: prepare_trajectory(config, plan))
    if not has_readings(traj):
        traj = run_stage("simulate", lambda: simulate_trajectory(plan, traj, config))
    raw = traj
    smooth = run_stage("filter", lambda: filtered(raw, config.thresholds.filter_window))
    thresholds = run_stage("fit", lambda: derive_thresholds(smooth, config))
    classified = run_stage("classify", lambda: smooth.classify(thresholds))
    mapping = run_stage("map", lambda: map_trajectory(classified, plan, thresholds, config))
    violations = mapping.trace.free_ray_wall_hits(plan)
    if violations:
        logger.warning(f"{violations} cells on k=0 rays are ground-truth walls")
    report = run_stage(
        "evaluate",
        lambda: evaluate_run(classified, plan, mapping.belief, label, violations),
    )

    def write() -> Dict[str, Path]:
        created = not out.exists()
        out.mkdir(parents=True, exist_ok=True)
        staging = Path(tempfile.mkdtemp(prefix=".staging-", dir=out))
        ok = False
        try:
            export_grayscale(mapping.belief, staging / BELIEF_MAP_FILE)
            write_rssi_log(raw.to_log(plan), staging / TRAJECTORY_FILE)
            write_thresholds(thresholds, staging / THRESHOLDS_FILE)
            for i, router in enumerate(plan.routers):
                k_field(plan, router).to_csv(staging / KFIELD_FILE.format(index=i))
            write_report(report, staging)
            files: Dict[str, Path] = {}
            try:
                for staged in sorted(staging.iterdir()):
                    target = out / staged.name
                    os.replace(staged, target)
                    files[staged.name] = target
            except OSError:
                for moved in files.values():
                    moved.unlink(missing_ok=True)
                raise
            ok = True
            return files
        finally:
            shutil.rmtree(staging, ignore_errors=True)
            if not ok and created and not any(out.iterdir()):
                out.rmdir()

    files = run_stage("write", write)
    logger.info(f"Wrote {len(files)} files to {out}")
    return PipelineResult(
        plan=plan,
        trajectory=classified,
        thresholds=thresholds,
        mapping=mapping,
        report=report,
        files=files,
    )
