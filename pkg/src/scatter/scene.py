"""
Scatterer scenes: rendering, the text scene format, and stock scenes.

Scene files hold one shape per line::

    disk cx cy r amp
    rect x0 y0 x1 y1 amp

with coordinates in the unit square (cx and x0/x1 along the first axis).
Blank lines and ``#`` comments are ignored.
"""

import logging
import math
import re
from typing import Optional

import numpy as np
from pydantic import ValidationError

from src.exceptions import ConfigError, InvalidParameterError
from src.models.scene import DiskShape, RectShape, ScatterScene
from src.spectral.core import Image

logger = logging.getLogger(__name__)

_WAVE_NUMBER = re.compile(r"^\s*([0-9.eE+-]*)\s*\*?\s*(pi|π)?\s*$")


def parse_wave_number(text: str) -> float:
    """Parse "9.42", "3pi", "2.5*pi" or "pi"."""
    match = _WAVE_NUMBER.match(str(text))
    if not match or not (match.group(1) or match.group(2)):
        raise InvalidParameterError(f"cannot parse wave number {text!r}")
    factor = float(match.group(1)) if match.group(1) else 1.0
    value = factor * math.pi if match.group(2) else factor
    if not value > 0:
        raise InvalidParameterError(f"wave number must be positive, got {text!r}")
    return value


def pixel_centers(n: int) -> np.ndarray:
    return (np.arange(n) + 0.5) / n


def render_scene(scene: ScatterScene) -> Image:
    """Sample chi_D at pixel centers; overlapping shapes add their amplitudes."""
    n = scene.n
    x1, x2 = np.meshgrid(pixel_centers(n), pixel_centers(n), indexing="ij")
    chi = np.zeros((n, n))
    for shape in scene.shapes:
        if isinstance(shape, DiskShape):
            inside = (x1 - shape.cx) ** 2 + (x2 - shape.cy) ** 2 <= shape.r**2
        else:
            inside = (x1 >= shape.x0) & (x1 < shape.x1) & (x2 >= shape.y0) & (x2 < shape.y1)
        chi[inside] += shape.amp
    return Image(chi)


def parse_scene(
    text: str, n: int, k_wave: float, grid_scale: Optional[float] = None
) -> ScatterScene:
    """
    Parse scene text.

    Raises:
        ConfigError: On unknown shapes or invalid geometry
    """
    shapes = []
    for number, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        kind, *values = line.split()
        try:
            numbers = [float(v) for v in values]
            if kind == "disk" and len(numbers) in (3, 4):
                shapes.append(
                    DiskShape(
                        cx=numbers[0],
                        cy=numbers[1],
                        r=numbers[2],
                        amp=numbers[3] if len(numbers) == 4 else 1.0,
                    )
                )
            elif kind == "rect" and len(numbers) in (4, 5):
                shapes.append(
                    RectShape(
                        x0=numbers[0],
                        y0=numbers[1],
                        x1=numbers[2],
                        y1=numbers[3],
                        amp=numbers[4] if len(numbers) == 5 else 1.0,
                    )
                )
            else:
                raise ConfigError(f"line {number}: unknown shape {line!r}")
        except (ValueError, ValidationError) as e:
            raise ConfigError(f"line {number}: {e}") from e
    try:
        return ScatterScene(n=n, shapes=shapes, k_wave=k_wave, grid_scale=grid_scale)
    except ValidationError as e:
        raise ConfigError(f"invalid scene: {e}") from e


def format_scene(scene: ScatterScene) -> str:
    lines = []
    for shape in scene.shapes:
        if isinstance(shape, DiskShape):
            lines.append(f"disk {shape.cx!r} {shape.cy!r} {shape.r!r} {shape.amp!r}")
        else:
            lines.append(f"rect {shape.x0!r} {shape.y0!r} {shape.x1!r} {shape.y1!r} {shape.amp!r}")
    return "\n".join(lines) + "\n"


def bars_scene(
    n: int = 128,
    separation: int = 6,
    k_wave: float = 3 * math.pi,
    width: int = 4,
    length: int = 48,
    count: int = 4,
    amp: float = 255.0,
) -> ScatterScene:
    """
    Parallel bars `width` pixels wide, spaced by `separation` pixel gaps.

    Bars run along the first axis and are centered in the grid; all edges
    fall on pixel boundaries.
    """
    span = count * width + (count - 1) * separation
    if span > n - 2 or length > n - 2:
        raise InvalidParameterError(f"{count} bars with gap {separation} do not fit in n={n}")
    first = (n - span) // 2
    top = (n - length) // 2
    shapes = []
    for i in range(count):
        left = first + i * (width + separation)
        shapes.append(
            RectShape(
                x0=top / n, y0=left / n, x1=(top + length) / n, y1=(left + width) / n, amp=amp
            )
        )
    return ScatterScene(n=n, shapes=shapes, k_wave=k_wave)


def disks_scene(n: int = 128, k_wave: float = 3 * math.pi) -> ScatterScene:
    """Piecewise-constant disks of three amplitudes."""
    shapes = [
        DiskShape(cx=0.35, cy=0.3, r=0.12, amp=200.0),
        DiskShape(cx=0.65, cy=0.62, r=0.18, amp=120.0),
        DiskShape(cx=0.3, cy=0.72, r=0.08, amp=255.0),
    ]
    return ScatterScene(n=n, shapes=shapes, k_wave=k_wave)
