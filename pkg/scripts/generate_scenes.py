#!/usr/bin/env python3
"""Render the built-in synthetic floorplans as PGM files.

The files can be used as ``floorplan`` inputs of experiment configs, e.g. to
edit a generated scene by hand before mapping it.
"""

import argparse
import sys
from pathlib import Path

import numpy as np

# Add parent directory to path for imports
sys.path.insert(0, str(Path(__file__).parent.parent))

from kvis_mapping.config import SceneConfig
from kvis_mapping.grid.floorplan import Floorplan
from kvis_mapping.grid.imaging import plan_to_pixels, write_grayscale
from kvis_mapping.models import SceneKind
from kvis_mapping.simulation.scenes import build_scene


def main() -> int:
    parser = argparse.ArgumentParser(description="Write every built-in scene as a PGM file.")
    parser.add_argument("out", type=Path, help="output directory")
    parser.add_argument("--width", type=int, default=40, help="scene width in cells")
    parser.add_argument("--height", type=int, default=30, help="scene height in cells")
    parser.add_argument("--seed", type=int, default=0, help="seed for the random scene")
    parser.add_argument("--ascii", action="store_true", help="write plain-text P2 files")
    args = parser.parse_args()

    args.out.mkdir(parents=True, exist_ok=True)
    rng = np.random.default_rng(args.seed)
    for kind in SceneKind:
        scene = SceneConfig(kind=kind, width=args.width, height=args.height, door_width=4)
        plan = Floorplan(walls=build_scene(scene, rng), resolution=1.0)
        path = write_grayscale(
            plan_to_pixels(plan), args.out / f"{kind.value}.pgm", ascii_pgm=args.ascii
        )
        print(f"✅ {kind.value}: {plan.width}x{plan.height} -> {path}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
