"""
Image loading, spectrum renderings and 8-bit display exports.

Metrics always read float64 SFG1 grids; PNG/PGM files written here are
display views only.
"""

import logging
from pathlib import Path
from typing import Optional

import numpy as np
from PIL import Image as PILImage
from PIL import UnidentifiedImageError
from scipy import fft

from src.config import get_settings
from src.exceptions import GridFormatError, InvalidParameterError
from src.spectral.core import Image
from src.spectral.io import is_grid_file, read_grid

logger = logging.getLogger(__name__)
settings = get_settings()


def render_spectrum(img: Image, floor: Optional[float] = None) -> Image:
    """
    DC-centered log-magnitude spectrum scaled to [0, 255].

    Magnitudes below floor * max|c| map to 0, so frequencies absent from the
    image render exactly dark. An all-zero image renders uniformly 0.

    Args:
        img: Image to transform
        floor: Relative magnitude floor (defaults to config)
    """
    floor = settings.spectrum_floor if floor is None else floor
    if not 0 < floor < 1:
        raise InvalidParameterError(f"relative floor must lie in (0, 1), got {floor}")
    magnitude = np.abs(fft.fft2(img.pixels, norm="ortho"))
    peak = float(magnitude.max())
    if peak == 0.0:
        return Image(np.zeros_like(magnitude))
    low = np.log(floor * peak)
    scaled = (np.log(np.maximum(magnitude, floor * peak)) - low) / (np.log(peak) - low)
    return Image(255.0 * fft.fftshift(scaled))


def to_uint8(img: Image, normalize: bool = False) -> np.ndarray:
    """Clip (or min-max stretch) to 0..255 and round."""
    pixels = img.pixels
    if normalize:
        lo, hi = float(pixels.min()), float(pixels.max())
        pixels = (pixels - lo) * (255.0 / (hi - lo)) if hi > lo else np.zeros_like(pixels)
    return np.clip(np.rint(pixels), 0, 255).astype(np.uint8)


def export_display(img: Image, path: Path | str, normalize: bool = False) -> Path:
    """Write an 8-bit grayscale view; the format follows the suffix (.png, .pgm)."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    fmt = "PPM" if path.suffix.lower() == ".pgm" else None
    PILImage.fromarray(to_uint8(img, normalize)).save(path, format=fmt)
    logger.debug(f"Exported display image {path}")
    return path


def load_image(path: Path | str) -> Image:
    """
    Read an SFG1 grid, or any grayscale image Pillow can open.

    Raises:
        GridFormatError: If the file is missing or unreadable
    """
    path = Path(path)
    if not path.exists():
        raise GridFormatError(f"image file not found: {path}")
    if is_grid_file(path):
        return read_grid(path)
    try:
        with PILImage.open(path) as handle:
            pixels = np.asarray(handle.convert("L"), dtype=np.float64)
    except (UnidentifiedImageError, OSError) as e:
        raise GridFormatError(f"cannot read image {path}: {e}") from e
    return Image(pixels)
