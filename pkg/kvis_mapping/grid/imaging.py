"""Grayscale raster import/export for floorplans and belief maps.

Belief maps are written as 8-bit images with intensity round(prob_free * 255),
so free is 255, wall is 0 and unknown (0.5) becomes 128. On import any
intensity within 1 of 127.5 is read back as unknown, which also accepts the
127 that other tools use.
"""

import logging
from pathlib import Path
from typing import Iterable, Optional, Sequence, Union

import numpy as np
from PIL import Image, UnidentifiedImageError

from ..exceptions import FloorplanError, LoadError
from ..models import CellIndex
from .floorplan import UNKNOWN, BeliefMap, Floorplan

logger = logging.getLogger(__name__)

PathLike = Union[str, Path]

WALL_BELOW = 100
FREE_ABOVE = 155
WALL_PIXEL = 0
UNKNOWN_PIXEL = 127
FREE_PIXEL = 255


def encode_belief(belief: BeliefMap) -> np.ndarray:
    """Encode prob_free to 8-bit intensities (round half to even, so 0.5 -> 128)."""
    return np.rint(np.clip(belief.prob_free, 0.0, 1.0) * 255.0).astype(np.uint8)


def decode_belief(pixels: np.ndarray) -> BeliefMap:
    """Inverse of encode_belief; intensities near 127.5 decode to exactly 0.5."""
    pixels = np.asarray(pixels, dtype=np.float64)
    prob = pixels / 255.0
    prob[np.abs(pixels - 127.5) < 1.0] = UNKNOWN
    return BeliefMap.from_probabilities(prob)


def _write_pgm_ascii(pixels: np.ndarray, path: Path) -> None:
    height, width = pixels.shape
    rows = "\n".join(" ".join(str(int(v)) for v in row) for row in pixels)
    path.write_text(f"P2\n{width} {height}\n255\n{rows}\n")


def write_grayscale(pixels: np.ndarray, path: PathLike, ascii_pgm: bool = False) -> Path:
    """Write an 8-bit single-channel raster; format follows the file suffix.

    Args:
        pixels: uint8 array of shape (height, width)
        path: Destination (.pgm, .png, ...)
        ascii_pgm: Write plain P2 instead of binary P5 for .pgm paths

    Returns:
        The written path

    Raises:
        OSError: If the path is not writable
    """
    path = Path(path)
    pixels = np.asarray(pixels, dtype=np.uint8)
    if ascii_pgm and path.suffix.lower() == ".pgm":
        _write_pgm_ascii(pixels, path)
    else:
        Image.fromarray(pixels).save(path)
    logger.debug(f"Wrote {pixels.shape[1]}x{pixels.shape[0]} raster to {path}")
    return path


def export_grayscale(belief: BeliefMap, path: PathLike, ascii_pgm: bool = False) -> Path:
    """Export a belief map as an 8-bit grayscale image."""
    return write_grayscale(encode_belief(belief), path, ascii_pgm=ascii_pgm)


def export_wall_grid(
    walls: np.ndarray, path: PathLike, known: Optional[np.ndarray] = None
) -> Path:
    """Export a wall grid: walls 0, known non-walls 255, everything else 127."""
    walls = np.asarray(walls, dtype=bool)
    pixels = np.full(walls.shape, UNKNOWN_PIXEL, dtype=np.uint8)
    if known is not None:
        pixels[np.asarray(known, dtype=bool)] = FREE_PIXEL
    pixels[walls] = WALL_PIXEL
    return write_grayscale(pixels, path)


def _read_pgm_ascii(path: Path) -> np.ndarray:
    tokens = []
    for line in path.read_text().splitlines():
        tokens.extend(line.split("#", 1)[0].split())
    if len(tokens) < 4 or tokens[0] != "P2":
        raise LoadError(path, "malformed P2 header")
    width, height, maxval = (int(t) for t in tokens[1:4])
    values = np.array(tokens[4:], dtype=np.int64)
    if values.size != width * height:
        raise LoadError(path, f"expected {width * height} pixels, found {values.size}")
    if maxval <= 0:
        raise LoadError(path, f"invalid maxval {maxval}")
    return np.rint(values.reshape(height, width) * (255.0 / maxval)).astype(np.uint8)


def read_grayscale(path: PathLike) -> np.ndarray:
    """Read a grayscale PGM (P2/P5) or PNG into a uint8 array.

    Raises:
        LoadError: If the file is unreadable, not grayscale or has zero area
    """
    path = Path(path)
    try:
        with path.open("rb") as fh:
            magic = fh.read(2)
        if magic == b"P2":
            pixels = _read_pgm_ascii(path)
        else:
            with Image.open(path) as image:
                if image.mode == "1":
                    image = image.convert("L")
                elif image.mode != "L":
                    raise LoadError(path, f"expected a grayscale image, got mode {image.mode}")
                pixels = np.array(image, dtype=np.uint8)
    except (OSError, UnidentifiedImageError, ValueError) as e:
        raise LoadError(path, f"cannot read raster: {e}") from e

    if pixels.ndim != 2 or pixels.size == 0:
        raise LoadError(path, "raster has zero area")
    return pixels


def read_belief(path: PathLike) -> BeliefMap:
    """Re-import a belief map written by export_grayscale."""
    return decode_belief(read_grayscale(path))


def floorplan_from_pixels(
    pixels: np.ndarray, resolution: float, routers: Iterable[Sequence[int]] = ()
) -> Floorplan:
    """Threshold a grayscale raster into a binary floorplan.

    Intensities above 155 are free; everything else, including the unknown
    band between 100 and 155, is treated as wall.
    """
    pixels = np.asarray(pixels)
    walls = pixels <= FREE_ABOVE
    unknown = int(np.count_nonzero((pixels >= WALL_BELOW) & (pixels <= FREE_ABOVE)))
    if unknown:
        logger.warning(f"{unknown} unknown-intensity pixels treated as walls")
    return Floorplan(
        walls=walls,
        resolution=resolution,
        routers=tuple(CellIndex(int(r[0]), int(r[1])) for r in routers),
    )


def load_floorplan(
    path: PathLike, resolution: float, routers: Iterable[Sequence[int]] = ()
) -> Floorplan:
    """Load a ground-truth floorplan raster.

    Args:
        path: Grayscale PGM or PNG (white free space, black walls)
        resolution: Meters per cell
        routers: Router cells to attach

    Returns:
        Floorplan with routers validated against the walls

    Raises:
        LoadError: If the raster is unreadable, not grayscale, zero-area, has no
            free cell, or a router is invalid
    """
    pixels = read_grayscale(path)
    if not np.any(pixels > FREE_ABOVE):
        raise LoadError(path, "floorplan has no free cell")
    try:
        plan = floorplan_from_pixels(pixels, resolution, routers)
    except FloorplanError as e:
        raise LoadError(path, str(e)) from e
    logger.info(
        f"Loaded floorplan {path}: {plan.width}x{plan.height} cells, "
        f"{int(plan.walls.sum())} wall cells, {len(plan.routers)} routers"
    )
    return plan


def plan_to_pixels(plan: Floorplan) -> np.ndarray:
    """Render a floorplan as black walls on white."""
    return np.where(plan.walls, WALL_PIXEL, FREE_PIXEL).astype(np.uint8)
