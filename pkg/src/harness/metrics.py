"""
Experiment metrics beyond PSNR.
"""

import numpy as np
from scipy import fft, ndimage

from src.spectral.core import FreqMask, Image, _same_size
from src.spectral.metrics import mse, psnr

__all__ = ["constraint_deviation", "count_components", "mse", "psnr"]


def constraint_deviation(restored: Image, g: Image, mask: FreqMask) -> float:
    """max |F(restored) - F(g)| over the known frequencies."""
    _same_size(restored.n, g.n)
    _same_size(g.n, mask.n)
    diff = fft.fft2(restored.pixels - g.pixels, norm="ortho")
    return float(np.max(np.abs(diff[mask.known]), initial=0.0))


def count_components(img: Image, threshold: float = 0.5) -> int:
    """
    Connected components (4-connectivity) of the pixels above
    threshold * max(img).
    """
    peak = float(img.pixels.max())
    if peak <= 0:
        return 0
    _, count = ndimage.label(img.pixels > threshold * peak)
    return int(count)
