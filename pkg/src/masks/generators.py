"""
Frequency mask generators for the band, scattering and tomography experiments.

Every generator returns a FreqMask, i.e. a symmetric set with Nyquist
frequencies removed.
"""

import logging
import math
from typing import Optional

import numpy as np

from src.exceptions import InvalidParameterError
from src.models.params import BandNorm, BandSpec, TomographyStyle
from src.models.scene import default_grid_scale
from src.spectral.core import FreqMask, frequency_grid, nyquist_lines

logger = logging.getLogger(__name__)

UNIT_TOL = 1e-9


def band_mask(n: int, spec: BandSpec) -> FreqMask:
    """
    Keep every frequency whose radius lies in one of the half-open bands.

    Args:
        n: Grid side length
        spec: Bands (r_lo, r_hi) and the radius norm

    Returns:
        FreqMask with r_lo <= ||k|| < r_hi for some band
    """
    if any(hi > n / 2 for _, hi in spec.bands):
        raise InvalidParameterError(f"band radius exceeds n/2 = {n // 2}")
    k1, k2 = frequency_grid(n)
    if spec.norm == BandNorm.MAX:
        radius = np.maximum(np.abs(k1), np.abs(k2)).astype(float)
    else:
        radius = np.hypot(k1, k2)
    known = np.zeros((n, n), dtype=bool)
    for lo, hi in spec.bands:
        known |= (radius >= lo) & (radius < hi)
    mask = FreqMask.from_array(known)
    logger.info(f"Band mask n={n} bands={spec.bands} norm={spec.norm.value}: {mask.count} kept")
    return mask


def ring_mask(n: int = 128) -> FreqMask:
    """Default ring mask: low-pass core plus two max-norm rings, scaled to n."""
    scale = n / 128
    bands = [(lo * scale, hi * scale) for lo, hi in BandSpec.rings().bands]
    return band_mask(n, BandSpec(bands=bands, norm=BandNorm.MAX))


def equispaced_directions(count: int, offset: float = 0.0) -> np.ndarray:
    """count unit vectors at angles offset + 2 pi j / count."""
    if count < 1:
        raise InvalidParameterError(f"need at least one direction, got {count}")
    angles = offset + 2 * math.pi * np.arange(count) / count
    return np.stack([np.cos(angles), np.sin(angles)], axis=1)


def _check_directions(dirs: np.ndarray, name: str) -> np.ndarray:
    dirs = np.atleast_2d(np.asarray(dirs, dtype=np.float64))
    if dirs.ndim != 2 or dirs.shape[1] != 2 or dirs.shape[0] < 1:
        raise InvalidParameterError(f"{name} must be a non-empty (D, 2) array")
    if np.any(np.abs(np.linalg.norm(dirs, axis=1) - 1) > UNIT_TOL):
        raise InvalidParameterError(f"{name} must contain unit vectors")
    return dirs


def scattering_frequencies(
    k_wave: float,
    dirs_in: np.ndarray,
    dirs_out: np.ndarray,
    grid_scale: float,
) -> tuple[np.ndarray, np.ndarray]:
    """
    Born sample points for every (observation, incidence) pair.

    Returns:
        Tuple of (q, f): physical frequencies q = k (x_hat - d) and their
        index-unit counterparts f = grid_scale * q / (2 pi), both (D_out*D_in, 2).
        Rows run over observation directions, incidence fastest.
    """
    dirs_in = _check_directions(dirs_in, "dirs_in")
    dirs_out = _check_directions(dirs_out, "dirs_out")
    q = k_wave * (dirs_out[:, None, :] - dirs_in[None, :, :]).reshape(-1, 2)
    return q, grid_scale * q / (2 * math.pi)


def scattering_mask(
    n: int,
    k_wave: float,
    dirs_in: Optional[np.ndarray] = None,
    dirs_out: Optional[np.ndarray] = None,
    grid_scale: Optional[float] = None,
    n_dirs: int = 32,
) -> FreqMask:
    """
    Cells hit by the Born frequencies k (x_hat - d), nearest-neighbor gridded.

    Args:
        n: Grid side length
        k_wave: Wave number
        dirs_in: Incident directions (default: n_dirs equispaced)
        dirs_out: Observation directions (default: n_dirs equispaced)
        grid_scale: Index units per physical frequency / (2 pi); default
            maps radius 2k onto n/2 - 1
        n_dirs: Direction count used for the defaults

    Returns:
        FreqMask of the hit cells, symmetrized
    """
    if k_wave <= 0:
        raise InvalidParameterError(f"wave number must be positive, got {k_wave}")
    dirs_in = equispaced_directions(n_dirs) if dirs_in is None else dirs_in
    dirs_out = equispaced_directions(n_dirs) if dirs_out is None else dirs_out
    grid_scale = default_grid_scale(n, k_wave) if grid_scale is None else grid_scale
    _, f = scattering_frequencies(k_wave, dirs_in, dirs_out, grid_scale)
    cells = np.rint(f).astype(int)
    limit = n // 2 - 1
    outside = np.any(np.abs(cells) > limit, axis=1)
    if np.any(outside):
        raise InvalidParameterError(
            f"{int(outside.sum())} scattering points fall outside the {n}x{n} grid; "
            "reduce grid_scale or k_wave"
        )
    known = np.zeros((n, n), dtype=bool)
    known[cells[:, 0] % n, cells[:, 1] % n] = True
    mask = FreqMask.from_array(known)
    logger.info(
        f"Scattering mask n={n} k={k_wave:.4g} D={len(dirs_in)}x{len(dirs_out)} "
        f"scale={grid_scale:.4g}: {mask.count} kept"
    )
    return mask


def tomography_mask(
    n: int,
    n_lines: int,
    style: TomographyStyle = TomographyStyle.RADIAL,
    half_width: int = 0,
) -> FreqMask:
    """
    Lines of known coefficients, either through DC or parallel.

    Radial lines sit at angles pi j / n_lines and keep every frequency
    within half_width + 1/2 of the line; parallel lines run along k1 at
    equispaced k2 offsets and are 2 half_width + 1 cells thick.
    """
    if n_lines < 1:
        raise InvalidParameterError(f"n_lines must be at least 1, got {n_lines}")
    if half_width < 0:
        raise InvalidParameterError(f"half_width must be non-negative, got {half_width}")
    k1, k2 = frequency_grid(n)
    known = np.zeros((n, n), dtype=bool)
    if TomographyStyle(style) == TomographyStyle.RADIAL:
        reach = half_width + 0.5 + UNIT_TOL
        for j in range(n_lines):
            theta = math.pi * j / n_lines
            known |= np.abs(-math.sin(theta) * k1 + math.cos(theta) * k2) <= reach
    else:
        span = (n / 2 - 1 - half_width) * (n_lines - 1) / n_lines
        for offset in np.rint(np.linspace(-span, span, n_lines)).astype(int):
            known |= np.abs(k2 - offset) <= half_width
    # Nyquist cells are never part of a mask
    known &= ~nyquist_lines(n)
    mask = FreqMask.from_array(known)
    logger.info(f"Tomography mask n={n} lines={n_lines} style={style}: {mask.count} kept")
    return mask
