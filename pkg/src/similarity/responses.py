"""
Atom responses g_n = g (correlated with) phi_n, computed once per image via the FFT.
"""

import hashlib
import logging
from dataclasses import dataclass

import numpy as np
from scipy import fft

from src.atoms.eigensolver import AtomSet
from src.exceptions import SizeMismatchError
from src.spectral.core import Image

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class ResponseStack:
    """n0 response images; responses[:, x1, x2] is the feature vector at x."""

    responses: np.ndarray
    source_hash: str

    def __post_init__(self):
        responses = np.array(self.responses, dtype=np.float64, copy=True)
        responses.setflags(write=False)
        object.__setattr__(self, "responses", responses)

    @property
    def n0(self) -> int:
        return self.responses.shape[0]

    @property
    def n(self) -> int:
        return self.responses.shape[1]

    def features(self, points: np.ndarray) -> np.ndarray:
        """(m, n0) feature vectors at integer points (m, 2), wrapped on the torus."""
        points = np.asarray(points, dtype=int) % self.n
        return self.responses[:, points[:, 0], points[:, 1]].T


def image_hash(img: Image) -> str:
    return hashlib.sha256(img.pixels.tobytes()).hexdigest()


def filter_responses(g: Image, atoms: AtomSet) -> ResponseStack:
    """
    Circular cross-correlation of g with every atom.

    g_n(x) = sum_y g(y) phi_n(y - x), i.e. the inner product of g with the
    atom translated to x. Computed as F^-1(F(g) conj(F(phi_n))).
    """
    if g.n != atoms.n:
        raise SizeMismatchError(f"image side {g.n} does not match atom side {atoms.n}")
    spectrum = fft.fft2(g.pixels)
    atom_spectra = fft.fft2(atoms.atoms, axes=(1, 2))
    responses = fft.ifft2(spectrum[None] * np.conj(atom_spectra), axes=(1, 2)).real
    logger.debug(f"Filtered {g.n}x{g.n} image with {atoms.n0} atoms")
    return ResponseStack(responses=responses, source_hash=image_hash(g))
