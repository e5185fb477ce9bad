"""
SFA1 atom containers and the on-disk atom cache.

Layout (little-endian): magic b"SFA1", u32 n, u32 n0, f64 p, 32-byte
SHA-256 mask hash, then n0 atoms as n*n float64 grids (row-major,
origin-at-(0, 0)), then n0 float64 moments.
"""

import logging
import struct
from pathlib import Path
from typing import Optional

import numpy as np

from src.atoms.eigensolver import AtomSet, compute_atoms
from src.config import get_settings
from src.exceptions import GridFormatError
from src.spectral.core import FreqMask

logger = logging.getLogger(__name__)
settings = get_settings()

ATOM_MAGIC = b"SFA1"
_HEADER = struct.Struct("<4sIId32s")


def encode_atoms(atom_set: AtomSet) -> bytes:
    header = _HEADER.pack(
        ATOM_MAGIC, atom_set.n, atom_set.n0, atom_set.p, bytes.fromhex(atom_set.mask_id)
    )
    return (
        header
        + atom_set.atoms.astype("<f8").tobytes(order="C")
        + atom_set.moments.astype("<f8").tobytes()
    )


def decode_atoms(payload: bytes) -> AtomSet:
    if len(payload) < _HEADER.size:
        raise GridFormatError("truncated SFA1 header")
    magic, n, n0, p, digest = _HEADER.unpack_from(payload)
    if magic != ATOM_MAGIC:
        raise GridFormatError(f"bad atom magic {magic!r}")
    expected = _HEADER.size + 8 * n0 * (n * n + 1)
    if len(payload) != expected:
        raise GridFormatError(f"SFA1 payload has {len(payload)} bytes, expected {expected}")
    values = np.frombuffer(payload, dtype="<f8", offset=_HEADER.size)
    atoms = values[: n0 * n * n].reshape(n0, n, n)
    moments = values[n0 * n * n :]
    return AtomSet(atoms=atoms, moments=moments, p=p, mask_id=digest.hex())


def save_atoms(atom_set: AtomSet, path: Path | str) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_bytes(encode_atoms(atom_set))
    logger.info(f"Saved {atom_set.n0} atoms to {path}")
    return path


def load_atoms(path: Path | str) -> AtomSet:
    path = Path(path)
    if not path.exists():
        raise GridFormatError(f"atom file not found: {path}")
    return decode_atoms(path.read_bytes())


class AtomStore:
    """
    Cache of atom sets keyed by (mask hash, p, n0, gap rule).

    Atoms depend only on the mask, so they are computed once and reused
    across images and experiments.
    """

    def __init__(self, cache_dir: Optional[Path] = None):
        """
        Initialize the store.

        Args:
            cache_dir: Cache directory (defaults to config)
        """
        self.cache_dir = Path(cache_dir or settings.atom_cache_dir)

    def path_for(self, mask: FreqMask, p: float, n0: int, extend_to_gap: bool = False) -> Path:
        suffix = "_gap" if extend_to_gap else ""
        return self.cache_dir / f"{mask.mask_id[:20]}_p{p:g}_n{n0}{suffix}.sfa"

    def get_or_compute(
        self, mask: FreqMask, p: float, n0: int, seed: int = 0, extend_to_gap: bool = False
    ) -> AtomSet:
        """Load cached atoms for the key or compute and store them."""
        path = self.path_for(mask, p, n0, extend_to_gap)
        if path.exists():
            try:
                cached = load_atoms(path)
                fits = cached.n0 >= n0 if extend_to_gap else cached.n0 == n0
                if cached.mask_id == mask.mask_id and fits and cached.p == p:
                    logger.info(f"Atom cache hit: {path.name}")
                    return cached
                logger.warning(f"Atom cache entry {path.name} does not match its key")
            except GridFormatError as e:
                logger.warning(f"Ignoring corrupt atom cache entry {path.name}: {e}")
        atom_set = compute_atoms(mask, p, n0, seed=seed, extend_to_gap=extend_to_gap)
        save_atoms(atom_set, path)
        return atom_set


def get_atom_store(cache_dir: Optional[Path] = None) -> AtomStore:
    """Get an atom store instance."""
    return AtomStore(cache_dir=cache_dir)
