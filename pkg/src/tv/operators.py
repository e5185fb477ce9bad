"""
Periodic forward-difference gradient, its adjoint divergence, and isotropic TV.
"""

import numpy as np

from src.spectral.core import Image


def gradient(u: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Forward differences with wrap-around along each axis."""
    return np.roll(u, -1, axis=0) - u, np.roll(u, -1, axis=1) - u


def divergence(p1: np.ndarray, p2: np.ndarray) -> np.ndarray:
    """Negative adjoint of ``gradient``."""
    return p1 - np.roll(p1, 1, axis=0) + p2 - np.roll(p2, 1, axis=1)


def tv_array(u: np.ndarray) -> float:
    d1, d2 = gradient(u)
    return float(np.sum(np.sqrt(d1**2 + d2**2)))


def tv_value(u: Image) -> float:
    """Isotropic total variation sum_x sqrt(D1 u^2 + D2 u^2), periodic."""
    return tv_array(u.pixels)
