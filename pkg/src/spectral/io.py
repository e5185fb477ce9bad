"""
SFG1 float grid files.

Layout (little-endian): magic b"SFG1", u32 n, then n*n float64 values in
row-major order. Round trips are bit-exact.
"""

import logging
import struct
from pathlib import Path

import numpy as np

from src.exceptions import GridFormatError
from src.spectral.core import Image

logger = logging.getLogger(__name__)

GRID_MAGIC = b"SFG1"
_HEADER = struct.Struct("<4sI")


def encode_grid(img: Image) -> bytes:
    return _HEADER.pack(GRID_MAGIC, img.n) + img.pixels.astype("<f8").tobytes(order="C")


def decode_grid(payload: bytes) -> Image:
    if len(payload) < _HEADER.size:
        raise GridFormatError("truncated SFG1 header")
    magic, n = _HEADER.unpack_from(payload)
    if magic != GRID_MAGIC:
        raise GridFormatError(f"bad grid magic {magic!r}")
    expected = _HEADER.size + 8 * n * n
    if len(payload) != expected:
        raise GridFormatError(f"SFG1 payload has {len(payload)} bytes, expected {expected}")
    values = np.frombuffer(payload, dtype="<f8", offset=_HEADER.size).reshape(n, n)
    return Image(values.astype(np.float64))


def write_grid(img: Image, path: Path | str) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_bytes(encode_grid(img))
    logger.debug(f"Wrote {img.n}x{img.n} grid to {path}")
    return path


def read_grid(path: Path | str) -> Image:
    path = Path(path)
    try:
        return decode_grid(path.read_bytes())
    except FileNotFoundError as e:
        raise GridFormatError(f"grid file not found: {path}") from e


def is_grid_file(path: Path | str) -> bool:
    path = Path(path)
    with path.open("rb") as handle:
        return handle.read(4) == GRID_MAGIC
