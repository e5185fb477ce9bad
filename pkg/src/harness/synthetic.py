"""
Synthetic test images on a 0..255 scale.

They stand in for photographic test images: every one is periodic on the
torus and deterministic given its arguments.
"""

import math
from typing import Callable, Optional

import numpy as np

from src.exceptions import InvalidParameterError
from src.scatter.scene import bars_scene, disks_scene, render_scene
from src.spectral.core import Image

# (center x1, center x2, semi-axis 1, semi-axis 2, angle in degrees, value)
PHANTOM_ELLIPSES = [
    (0.0, 0.0, 0.69, 0.92, 0.0, 1.0),
    (0.0, -0.0184, 0.6624, 0.874, 0.0, -0.8),
    (0.0, 0.22, 0.11, 0.31, -18.0, -0.2),
    (0.0, -0.22, 0.16, 0.41, 18.0, -0.2),
    (-0.35, 0.0, 0.21, 0.25, 0.0, 0.1),
    (0.1, 0.0, 0.046, 0.046, 0.0, 0.1),
    (-0.1, 0.0, 0.046, 0.046, 0.0, 0.1),
    (0.605, -0.08, 0.023, 0.046, 0.0, 0.1),
    (0.605, 0.0, 0.023, 0.023, 0.0, 0.1),
    (0.605, 0.06, 0.046, 0.023, 0.0, 0.1),
]


def stripes_regions(n: int) -> np.ndarray:
    """True inside the centered disk of radius n/4 (horizontal stripes)."""
    i, j = np.meshgrid(np.arange(n), np.arange(n), indexing="ij")
    return (i - n / 2) ** 2 + (j - n / 2) ** 2 < (n / 4) ** 2


def stripes(n: int = 128, freq: Optional[int] = None, amplitude: float = 100.0) -> Image:
    """
    Two stripe textures: frequency (freq, 0) inside a centered disk and
    (0, freq) outside it, over a constant mid-gray.

    freq defaults to n // 4, a period of 4 pixels, so patches match exactly
    under any shift by a multiple of 4 across the stripes.
    """
    freq = n // 4 if freq is None else freq
    if not 0 < freq < n // 2:
        raise InvalidParameterError(f"stripe frequency {freq} must lie in (0, {n // 2})")
    idx = 2 * math.pi * freq * np.arange(n) / n
    inner = np.cos(idx)[:, None] * np.ones(n)[None, :]
    outer = np.ones(n)[:, None] * np.cos(idx)[None, :]
    pixels = np.where(stripes_regions(n), inner, outer)
    return Image(127.5 + amplitude * pixels)


def tiles(n: int = 60, tile: int = 5, distinct: int = 4, seed: int = 0) -> Image:
    """
    Mosaic of `distinct` random tiles.

    Tiles are offset by tile // 2 so that a tile-sized patch centered on any
    multiple of `tile` covers exactly one tile; each patch then has many
    exact duplicates.
    """
    if n % tile:
        raise InvalidParameterError(f"tile size {tile} must divide n={n}")
    rng = np.random.default_rng(seed)
    patterns = rng.uniform(0, 255, size=(distinct, tile, tile))
    side = n // tile
    a, b = np.meshgrid(np.arange(side), np.arange(side), indexing="ij")
    choice = (3 * a + b * b + a * b) % distinct
    mosaic = patterns[choice].transpose(0, 2, 1, 3).reshape(n, n)
    return Image(np.roll(mosaic, -(tile // 2), axis=(0, 1)))


def disks(n: int = 128) -> Image:
    return render_scene(disks_scene(n))


def bars(n: int = 128, separation: int = 6) -> Image:
    return render_scene(bars_scene(n, separation))


def phantom(n: int = 240) -> Image:
    """Shepp-Logan style head phantom on [-1, 1]^2, rescaled to 0..255."""
    coords = (np.arange(n) + 0.5) / n * 2 - 1
    x1, x2 = np.meshgrid(coords, coords, indexing="ij")
    pixels = np.zeros((n, n))
    for c1, c2, a1, a2, angle, value in PHANTOM_ELLIPSES:
        theta = math.radians(angle)
        d1, d2 = x1 - c1, x2 - c2
        r1 = d1 * math.cos(theta) + d2 * math.sin(theta)
        r2 = -d1 * math.sin(theta) + d2 * math.cos(theta)
        pixels[(r1 / a1) ** 2 + (r2 / a2) ** 2 <= 1] += value
    pixels = np.clip(pixels, 0, None)
    return Image(255.0 * pixels / pixels.max())


SYNTHETIC_IMAGES: dict[str, Callable[[int], Image]] = {
    "stripes": stripes,
    "tiles": tiles,
    "disks": disks,
    "bars": bars,
    "phantom": phantom,
}


def synthetic_image(name: str, n: int) -> Image:
    """Build a named synthetic image."""
    try:
        factory = SYNTHETIC_IMAGES[name]
    except KeyError as e:
        raise InvalidParameterError(
            f"unknown synthetic image {name!r}; choose from {sorted(SYNTHETIC_IMAGES)}"
        ) from e
    return factory(n)
