"""
Mask files: binary PBM (P4) and ASCII SFM1.

Both store the DC-centered view (DC at row n/2, column n/2). In PBM the
kept coefficients are white; in SFM1 they are '1'. Round trips are exact.
"""

import logging
from pathlib import Path

import numpy as np
from PIL import Image as PILImage
from PIL import UnidentifiedImageError
from scipy import fft

from src.exceptions import MaskFormatError
from src.spectral.core import FreqMask, mirror, nyquist_lines

logger = logging.getLogger(__name__)

SFM_MAGIC = "SFM1"


def _validate(known: np.ndarray, symmetrize: bool, source: str) -> FreqMask:
    n = known.shape[0]
    if known.ndim != 2 or known.shape[1] != n or n % 2:
        raise MaskFormatError(f"{source}: mask must be square with even side, got {known.shape}")
    if not np.array_equal(known, mirror(known)):
        if not symmetrize:
            raise MaskFormatError(
                f"{source}: mask is not symmetric under k -> -k (use --symmetrize)"
            )
        logger.warning(f"{source}: symmetrizing asymmetric mask")
        known = known | mirror(known)
    if np.any(known & nyquist_lines(n)):
        logger.warning(f"{source}: clearing Nyquist frequencies")
    return FreqMask.from_array(known, symmetrize=False)


def save_mask(mask: FreqMask, path: Path | str) -> Path:
    """Write a mask; the format follows the suffix (.pbm or anything else for SFM1)."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    centered = mask.centered()
    if path.suffix.lower() == ".pbm":
        PILImage.fromarray(centered).save(path, format="PPM")
    else:
        rows = ["".join("1" if bit else "0" for bit in row) for row in centered]
        path.write_text(f"{SFM_MAGIC} {mask.n}\n" + "\n".join(rows) + "\n", encoding="ascii")
    logger.info(f"Saved mask ({mask.count} kept) to {path}")
    return path


def load_mask(path: Path | str, symmetrize: bool = False) -> FreqMask:
    """
    Read a PBM or SFM1 mask.

    Args:
        path: Mask file
        symmetrize: Close an asymmetric mask under k -> -k instead of failing

    Returns:
        Validated FreqMask

    Raises:
        MaskFormatError: If the file cannot be parsed or is asymmetric
    """
    path = Path(path)
    if not path.exists():
        raise MaskFormatError(f"mask file not found: {path}")
    head = path.read_bytes()[:4]
    if head == SFM_MAGIC.encode("ascii"):
        centered = _parse_sfm(path.read_text(encoding="ascii"), str(path))
    else:
        try:
            with PILImage.open(path) as pil:
                centered = np.array(pil.convert("1"), dtype=bool)
        except (UnidentifiedImageError, OSError) as e:
            raise MaskFormatError(f"{path}: unreadable mask file: {e}") from e
    return _validate(fft.ifftshift(centered), symmetrize, str(path))


def _parse_sfm(text: str, source: str) -> np.ndarray:
    lines = [line.strip() for line in text.splitlines() if line.strip()]
    try:
        magic, size = lines[0].split()
        n = int(size)
    except (IndexError, ValueError) as e:
        raise MaskFormatError(f"{source}: bad SFM1 header") from e
    if magic != SFM_MAGIC:
        raise MaskFormatError(f"{source}: bad magic {magic!r}")
    rows = lines[1:]
    if len(rows) != n or any(len(row) != n or set(row) - {"0", "1"} for row in rows):
        raise MaskFormatError(f"{source}: expected {n} rows of {n} characters 0/1")
    return np.array([[ch == "1" for ch in row] for row in rows], dtype=bool)
