"""Command-line interface.

Subcommands mirror the pipeline stages and exchange the files they write::

    kvis-mapping simulate --config exp.json --out runs/a   # trajectory.csv, k-field CSVs
    kvis-mapping fit      --config exp.json --out runs/a   # thresholds.json
    kvis-mapping map      --config exp.json --out runs/a   # belief_map.pgm
    kvis-mapping eval     --config exp.json --out runs/a   # report.json, report.txt
    kvis-mapping dense    --kfield runs/a/kfield_router0.csv --out runs/a
    kvis-mapping pipeline --config exp.json --seed 7 --mode literal-eq4
"""

import argparse
import logging
import sys
from pathlib import Path
from typing import Any, Dict, List, Optional, Sequence, Tuple

from . import __version__
from .config import ExperimentConfig, configure_logging, get_settings
from .exceptions import KVisMappingError
from .grid.floorplan import Floorplan
from .grid.imaging import export_grayscale, export_wall_grid, read_belief
from .mapping.dense import dense_inverse
from .mapping.trajectory import Trajectory
from .metrics.report import format_report_table, write_report
from .models import WallMode
from .pipeline import (
    BELIEF_MAP_FILE,
    KFIELD_FILE,
    THRESHOLDS_FILE,
    TRAJECTORY_FILE,
    build_floorplan,
    derive_thresholds,
    evaluate_run,
    filtered,
    has_readings,
    map_trajectory,
    prepare_trajectory,
    resolve_output_dir,
    run_pipeline,
    run_stage,
    simulate_trajectory,
)
from .raycast.kfield import KField, k_field
from .rssi.logs import read_rssi_log, write_rssi_log
from .rssi.thresholds import RssiThresholds, read_thresholds, write_thresholds

logger = logging.getLogger(__name__)

DENSE_WALLS_FILE = "dense_walls.pgm"


def build_parser() -> argparse.ArgumentParser:
    """Create the argument parser with one subparser per stage."""
    parser = argparse.ArgumentParser(
        prog="kvis-mapping",
        description="Occupancy maps from WiFi RSSI by inverse k-visibility.",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True, metavar="COMMAND")

    def common(p: argparse.ArgumentParser, needs_config: bool = True) -> None:
        if needs_config:
            p.add_argument("--config", type=Path, required=True, help="experiment JSON file")
            p.add_argument("--seed", type=int, help="override the experiment seed")
            p.add_argument(
                "--mode",
                choices=[m.value for m in WallMode],
                help="wall distribution along subsegments",
            )
        p.add_argument("--out", type=Path, help="output directory")
        p.add_argument("-v", "--verbose", action="store_true", help="debug logging")

    def inputs(p: argparse.ArgumentParser, *names: str) -> None:
        if "trajectory" in names:
            p.add_argument(
                "--trajectory", type=Path, help=f"RSSI log (default OUT/{TRAJECTORY_FILE})"
            )
        if "thresholds" in names:
            p.add_argument(
                "--thresholds", type=Path, help=f"thresholds JSON (default OUT/{THRESHOLDS_FILE})"
            )
        if "map" in names:
            p.add_argument("--map", type=Path, help=f"belief map (default OUT/{BELIEF_MAP_FILE})")

    common(sub.add_parser("simulate", help="generate a trajectory and simulate RSSI"))
    p = sub.add_parser("fit", help="fit RSSI thresholds from a trajectory log")
    common(p)
    inputs(p, "trajectory")
    p = sub.add_parser("map", help="build a belief map from a trajectory log")
    common(p)
    inputs(p, "trajectory", "thresholds")
    p = sub.add_parser("eval", help="score a belief map against the floorplan")
    common(p)
    inputs(p, "trajectory", "thresholds", "map")
    p = sub.add_parser("dense", help="dense inverse k-visibility on a k-field CSV")
    common(p, needs_config=False)
    p.add_argument("--kfield", type=Path, required=True, help="k-field CSV")
    p = sub.add_parser("pipeline", help="run every stage end to end")
    common(p)
    p.add_argument("--label", default="", help="report column title")
    return parser


def load_config(args: argparse.Namespace) -> ExperimentConfig:
    """Load the experiment file and apply command-line overrides."""
    config = ExperimentConfig.load(args.config)
    update: Dict[str, Any] = {}
    if args.seed is not None:
        update["seed"] = args.seed
    if args.mode is not None:
        update["mapper"] = config.mapper.model_copy(update={"wall_mode": WallMode(args.mode)})
    return config.model_copy(update=update) if update else config


def _input(args: argparse.Namespace, name: str, out: Path, default: str) -> Path:
    value = getattr(args, name, None)
    return Path(value) if value is not None else out / default


def _logged_trajectory(
    args: argparse.Namespace, config: ExperimentConfig, out: Path
) -> Tuple[Floorplan, Trajectory]:
    plan = run_stage("load", lambda: build_floorplan(config))
    path = _input(args, "trajectory", out, TRAJECTORY_FILE)
    log = run_stage("trajectory", lambda: read_rssi_log(path))
    traj = run_stage("trajectory", lambda: Trajectory.from_log(log, plan))
    return plan, traj


def cmd_simulate(args: argparse.Namespace) -> int:
    config = load_config(args)
    out = resolve_output_dir(config, args.out)
    plan = run_stage("load", lambda: build_floorplan(config))
    traj = run_stage("trajectory", lambda: prepare_trajectory(config, plan))
    if not has_readings(traj):
        traj = run_stage("simulate", lambda: simulate_trajectory(plan, traj, config))
    out.mkdir(parents=True, exist_ok=True)
    write_rssi_log(traj.to_log(plan), out / TRAJECTORY_FILE)
    for i, router in enumerate(plan.routers):
        k_field(plan, router).to_csv(out / KFIELD_FILE.format(index=i))
    print(f"wrote {len(traj)} samples to {out / TRAJECTORY_FILE}")
    return 0


def cmd_fit(args: argparse.Namespace) -> int:
    config = load_config(args)
    out = resolve_output_dir(config, args.out)
    _, traj = _logged_trajectory(args, config, out)
    smooth = run_stage("filter", lambda: filtered(traj, config.thresholds.filter_window))
    thresholds = run_stage("fit", lambda: derive_thresholds(smooth, config))
    out.mkdir(parents=True, exist_ok=True)
    write_thresholds(thresholds, out / THRESHOLDS_FILE)
    for j, th in enumerate(thresholds):
        print(f"router {j}: bounds {', '.join(f'{t:.2f}' for t in th.bounds)}")
    return 0


def _classified(
    args: argparse.Namespace, config: ExperimentConfig, out: Path
) -> Tuple[Floorplan, Trajectory, List[RssiThresholds]]:
    plan, traj = _logged_trajectory(args, config, out)
    path = _input(args, "thresholds", out, THRESHOLDS_FILE)
    thresholds: List[RssiThresholds] = run_stage("fit", lambda: read_thresholds(path))
    smooth = run_stage("filter", lambda: filtered(traj, config.thresholds.filter_window))
    classified = run_stage("classify", lambda: smooth.classify(thresholds))
    return plan, classified, thresholds


def cmd_map(args: argparse.Namespace) -> int:
    config = load_config(args)
    out = resolve_output_dir(config, args.out)
    plan, classified, thresholds = _classified(args, config, out)
    mapping = run_stage("map", lambda: map_trajectory(classified, plan, thresholds, config))
    out.mkdir(parents=True, exist_ok=True)
    export_grayscale(mapping.belief, out / BELIEF_MAP_FILE)
    print(f"wrote {out / BELIEF_MAP_FILE}")
    return 0


def cmd_eval(args: argparse.Namespace) -> int:
    config = load_config(args)
    out = resolve_output_dir(config, args.out)
    plan, classified, _ = _classified(args, config, out)
    path = _input(args, "map", out, BELIEF_MAP_FILE)
    belief = run_stage("evaluate", lambda: read_belief(path))
    report = run_stage("evaluate", lambda: evaluate_run(classified, plan, belief))
    out.mkdir(parents=True, exist_ok=True)
    write_report(report, out)
    print(format_report_table(report), end="")
    return 0


def cmd_dense(args: argparse.Namespace) -> int:
    out = args.out if args.out is not None else get_settings().output_dir
    field = KField.from_csv(args.kfield)
    walls = dense_inverse(field)
    out.mkdir(parents=True, exist_ok=True)
    export_wall_grid(walls, out / DENSE_WALLS_FILE, known=~field.wall_mask())
    print(f"marked {int(walls.sum())} wall cells; wrote {out / DENSE_WALLS_FILE}")
    return 0


def cmd_pipeline(args: argparse.Namespace) -> int:
    config = load_config(args)
    result = run_pipeline(config, output_dir=args.out, label=args.label)
    print(format_report_table(result.report), end="")
    return 0


COMMANDS = {
    "simulate": cmd_simulate,
    "fit": cmd_fit,
    "map": cmd_map,
    "eval": cmd_eval,
    "dense": cmd_dense,
    "pipeline": cmd_pipeline,
}


def main(argv: Optional[Sequence[str]] = None) -> int:
    """Entry point; returns the process exit status."""
    args = build_parser().parse_args(argv)
    configure_logging(get_settings(), verbose=args.verbose)
    try:
        return COMMANDS[args.command](args)
    except KVisMappingError as e:
        print(f"error: {e}", file=sys.stderr)
        return 1
    except OSError as e:
        print(f"error: {e}", file=sys.stderr)
        return 1
