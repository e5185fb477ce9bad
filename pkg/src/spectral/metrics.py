"""
Image quality metrics.
"""

import math
from typing import Optional

import numpy as np

from src.config import get_settings
from src.spectral.core import Image, _same_size


def mse(a: Image, b: Image) -> float:
    _same_size(a.n, b.n)
    return float(np.mean((a.pixels - b.pixels) ** 2))


def psnr(estimate: Image, reference: Image, peak: Optional[float] = None) -> float:
    """
    Peak signal-to-noise ratio 10 log10(peak^2 / MSE) in dB.

    Returns ``math.inf`` for identical images.
    """
    peak = peak if peak is not None else get_settings().psnr_peak
    error = mse(estimate, reference)
    if error == 0.0:
        return math.inf
    return 10.0 * math.log10(peak**2 / error)
