"""
Born far-field synthesis and gridding.

Under the Born approximation the far field at observation direction x_hat
for incidence d is the Fourier transform of chi_D at q = k (x_hat - d).
Pixel (i, j) sits at (i/n, j/n) * grid_scale in physical units, so the
pixel model's far field at q is sum chi e^{-i q . y}, and samples landing
exactly on frequency index f = grid_scale q / (2 pi) equal n times the
unitary DFT coefficient.
"""

import logging
import math
from dataclasses import dataclass
from enum import Enum
from typing import Optional

import numpy as np
from scipy import special

from src.exceptions import InvalidParameterError, SizeMismatchError
from src.masks.generators import equispaced_directions, scattering_frequencies
from src.models.scene import DiskShape, ScatterScene
from src.scatter.scene import render_scene
from src.spectral.core import FreqMask, Spectrum, mirror

logger = logging.getLogger(__name__)

SAMPLE_CHUNK = 256


class FarFieldModel(str, Enum):
    """How chi_D is transformed."""

    PIXEL = "pixel"
    CONTINUOUS = "continuous"


@dataclass(frozen=True)
class FarFieldData:
    """Far-field samples: physical points q, index-unit points freq, values."""

    q: np.ndarray
    freq: np.ndarray
    values: np.ndarray

    @property
    def count(self) -> int:
        return len(self.values)


def _pixel_far_field(chi: np.ndarray, freq: np.ndarray) -> np.ndarray:
    n = chi.shape[0]
    idx = np.arange(n) / n
    values = np.empty(len(freq), dtype=np.complex128)
    for start in range(0, len(freq), SAMPLE_CHUNK):
        f = freq[start : start + SAMPLE_CHUNK]
        e1 = np.exp(-2j * math.pi * f[:, 0:1] * idx[None, :])
        e2 = np.exp(-2j * math.pi * f[:, 1:2] * idx[None, :])
        values[start : start + SAMPLE_CHUNK] = np.sum((e1 @ chi) * e2, axis=1)
    return values


def _segment_transform(omega: np.ndarray, a0: float, a1: float) -> np.ndarray:
    """integral_{a0}^{a1} e^{-i omega y} dy."""
    small = np.abs(omega) < 1e-12
    safe = np.where(small, 1.0, omega)
    value = (np.exp(-1j * safe * a0) - np.exp(-1j * safe * a1)) / (1j * safe)
    return np.where(small, a1 - a0, value)


def _continuous_far_field(scene: ScatterScene, q: np.ndarray) -> np.ndarray:
    """n^2 times the exact transform of chi_D, phase-aligned with the pixel model."""
    n = scene.n
    omega = q * scene.effective_grid_scale
    # pixel i is centered at (i + 1/2)/n but phased at i/n
    values = np.zeros(len(q), dtype=np.complex128)
    for shape in scene.shapes:
        if isinstance(shape, DiskShape):
            radius = np.hypot(omega[:, 0], omega[:, 1]) * shape.r
            small = radius < 1e-12
            safe = np.where(small, 1.0, radius)
            profile = np.where(small, 1.0, 2.0 * special.j1(safe) / safe)
            phase = np.exp(-1j * (omega[:, 0] * shape.cx + omega[:, 1] * shape.cy))
            values += shape.amp * math.pi * shape.r**2 * profile * phase
        else:
            values += (
                shape.amp
                * _segment_transform(omega[:, 0], shape.x0, shape.x1)
                * _segment_transform(omega[:, 1], shape.y0, shape.y1)
            )
    shift = np.exp(1j * (omega[:, 0] + omega[:, 1]) * 0.5 / n)
    return n * n * values * shift


def far_field(
    scene: ScatterScene,
    dirs_in: Optional[np.ndarray] = None,
    dirs_out: Optional[np.ndarray] = None,
    n_dirs: int = 32,
    model: FarFieldModel = FarFieldModel.PIXEL,
) -> FarFieldData:
    """
    Far-field samples for every (observation, incidence) pair.

    Args:
        scene: Scatterer scene
        dirs_in: Unit incidence directions (default: n_dirs equispaced)
        dirs_out: Unit observation directions (default: n_dirs equispaced)
        n_dirs: Direction count for the defaults
        model: PIXEL sums the rendered grid exactly; CONTINUOUS transforms the
            shapes analytically, a model mismatch with the pixel grid

    Returns:
        FarFieldData with D_out * D_in samples, incidence fastest
    """
    dirs_in = equispaced_directions(n_dirs) if dirs_in is None else dirs_in
    dirs_out = equispaced_directions(n_dirs) if dirs_out is None else dirs_out
    q, freq = scattering_frequencies(
        scene.k_wave, dirs_in, dirs_out, scene.effective_grid_scale
    )
    if model == FarFieldModel.CONTINUOUS:
        values = _continuous_far_field(scene, q)
    else:
        values = _pixel_far_field(render_scene(scene).pixels, freq)
    logger.info(f"Synthesized {len(values)} {model.value} far-field samples")
    return FarFieldData(q=q, freq=freq, values=values)


def grid_far_field(data: FarFieldData, n: int) -> tuple[Spectrum, FreqMask]:
    """
    Nearest-cell gridding of far-field samples into a partial spectrum.

    Colliding samples are averaged, then c(k) and conj(c(-k)) are averaged so
    the result is Hermitian. Samples outside |k_i| <= n/2 - 1 are dropped and
    reported.

    Returns:
        (Spectrum supported on the hit cells, FreqMask of those cells)
    """
    if n < 8 or n % 2:
        raise InvalidParameterError(f"grid side n={n} must be even and at least 8")
    cells = np.rint(np.asarray(data.freq)).astype(np.int64).reshape(-1, 2)
    limit = n // 2 - 1
    inside = np.all(np.abs(cells) <= limit, axis=1)
    if not np.all(inside):
        logger.warning(
            f"Dropped {int((~inside).sum())} of {len(cells)} far-field samples outside the grid"
        )
    cells = cells[inside] % n
    values = np.asarray(data.values)[inside] / n

    sums = np.zeros((n, n), dtype=np.complex128)
    counts = np.zeros((n, n))
    np.add.at(sums, (cells[:, 0], cells[:, 1]), values)
    np.add.at(counts, (cells[:, 0], cells[:, 1]), 1.0)
    hit = counts > 0
    mean = np.where(hit, sums / np.maximum(counts, 1.0), 0.0)

    mirrored_hit = mirror(hit)
    mirrored = np.conj(mirror(mean))
    coeffs = np.where(hit & mirrored_hit, 0.5 * (mean + mirrored), 0.0)
    coeffs = np.where(hit & ~mirrored_hit, mean, coeffs)
    coeffs = np.where(~hit & mirrored_hit, mirrored, coeffs)

    mask = FreqMask.from_array(hit, symmetrize=True)
    logger.info(f"Gridded {int(inside.sum())} samples into {mask.count} cells")
    return Spectrum(coeffs), mask


def add_noise(
    spec: Spectrum,
    mask: FreqMask,
    sigma_rel: float,
    seed: int = 0,
    reference_norm: Optional[float] = None,
) -> Spectrum:
    """
    Add Hermitian complex Gaussian noise on the mask, rescaled exactly.

    Args:
        spec: Spectrum to perturb
        mask: Cells receiving noise
        sigma_rel: Noise norm relative to reference_norm
        seed: RNG seed
        reference_norm: ||g0||_2 (defaults to ||spec||)

    Returns:
        Spectrum whose difference from spec has norm sigma_rel * reference_norm
    """
    if sigma_rel < 0:
        raise InvalidParameterError(f"noise level must be nonnegative, got {sigma_rel}")
    if spec.n != mask.n:
        raise SizeMismatchError(f"spectrum side {spec.n} does not match mask side {mask.n}")
    if sigma_rel == 0:
        return spec
    rng = np.random.default_rng(seed)
    shape = (spec.n, spec.n)
    noise = (rng.standard_normal(shape) + 1j * rng.standard_normal(shape)) * mask.known
    noise = 0.5 * (noise + np.conj(mirror(noise)))
    size = float(np.linalg.norm(noise))
    if size == 0.0:
        logger.warning("Mask has no cells to carry noise; spectrum left unchanged")
        return spec
    target = sigma_rel * (spec.norm() if reference_norm is None else reference_norm)
    return Spectrum(spec.coeffs + noise * (target / size))
