"""
Patch distances.

- atom-based: Euclidean distance between atom-response vectors
- SSD: Euclidean distance between rho x rho patches (fed the corrupted
  image), or the oracle distance when fed the clean image

Both reduce to the Euclidean distance between per-point feature vectors,
which is what the graph builder consumes.
"""

from typing import Union

import numpy as np

from src.exceptions import InvalidParameterError
from src.similarity.responses import ResponseStack
from src.spectral.core import Image

MetricInput = Union[ResponseStack, Image]


def patch_offsets(rho: int) -> np.ndarray:
    """(rho^2, 2) offsets of a centered rho x rho window, row-major."""
    if rho < 1 or rho % 2 == 0:
        raise InvalidParameterError(f"patch size rho={rho} must be odd")
    r = rho // 2
    t1, t2 = np.meshgrid(np.arange(-r, r + 1), np.arange(-r, r + 1), indexing="ij")
    return np.stack([t1.ravel(), t2.ravel()], axis=1)


def patch_pixels(img: Image, points: np.ndarray, rho: int) -> np.ndarray:
    """(m, rho^2) periodic patches centered at integer points (m, 2)."""
    points = np.asarray(points, dtype=int).reshape(-1, 2)
    offsets = patch_offsets(rho)
    rows = (points[:, None, 0] + offsets[None, :, 0]) % img.n
    cols = (points[:, None, 1] + offsets[None, :, 1]) % img.n
    return img.pixels[rows, cols]


def patch_features(metric_input: MetricInput, points: np.ndarray, rho: int) -> np.ndarray:
    """Feature vectors whose Euclidean distances are the patch distances."""
    if isinstance(metric_input, ResponseStack):
        return metric_input.features(np.asarray(points).reshape(-1, 2))
    return patch_pixels(metric_input, points, rho)


def dist_atom(stack: ResponseStack, x_k: tuple[int, int], x_l: tuple[int, int]) -> float:
    """(sum_n |g_n(x_k) - g_n(x_l)|^2)^(1/2)."""
    features = stack.features(np.array([x_k, x_l]))
    return float(np.linalg.norm(features[0] - features[1]))


def dist_ssd(img: Image, x_k: tuple[int, int], x_l: tuple[int, int], rho: int) -> float:
    """||p(x_k) - p(x_l)||_2 over rho x rho periodic windows."""
    patches = patch_pixels(img, np.array([x_k, x_l]), rho)
    return float(np.linalg.norm(patches[0] - patches[1]))
