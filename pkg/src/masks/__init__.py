"""
Frequency mask generation and mask files.
"""

from src.masks.generators import (
    band_mask,
    equispaced_directions,
    ring_mask,
    scattering_mask,
    tomography_mask,
)
from src.masks.io import load_mask, save_mask

__all__ = [
    "band_mask",
    "equispaced_directions",
    "load_mask",
    "ring_mask",
    "save_mask",
    "scattering_mask",
    "tomography_mask",
]
