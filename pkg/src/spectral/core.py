"""
Images, spectra and frequency masks on the periodic unit torus.

Conventions:
- pixel (i, j) sits at x = (i/n, j/n); axis 0 carries x1 and k1
- ``dft2`` is the unitary DFT with kernel exp(-2i pi k.x), so
  ||dft2(img)|| = ||img|| and the DC coefficient equals n * mean
- spectra and masks are stored in unshifted order: frequency k lives at
  array index (k1 mod n, k2 mod n); ``centered()`` gives the DC-centered view
"""

import hashlib
import logging
from dataclasses import dataclass

import numpy as np
from scipy import fft

from src.config import get_settings
from src.exceptions import InvalidParameterError, NonHermitianError, SizeMismatchError

logger = logging.getLogger(__name__)

MIN_SIDE = 8


def _frozen(array: np.ndarray, dtype) -> np.ndarray:
    out = np.array(array, dtype=dtype, copy=True)
    out.setflags(write=False)
    return out


def mirror(array: np.ndarray) -> np.ndarray:
    """Return a with a[k] replaced by a[-k] (indices mod n) on the last two axes."""
    return np.roll(array[..., ::-1, ::-1], 1, axis=(-2, -1))


def nyquist_lines(n: int) -> np.ndarray:
    """Boolean grid marking every frequency with a component equal to -n/2."""
    lines = np.zeros((n, n), dtype=bool)
    lines[n // 2, :] = True
    lines[:, n // 2] = True
    return lines


def frequency_grid(n: int) -> tuple[np.ndarray, np.ndarray]:
    """Centered integer frequencies (k1, k2) for every unshifted array index."""
    k = np.fft.fftfreq(n, d=1.0 / n).round().astype(int)
    return np.meshgrid(k, k, indexing="ij")


def _check_side(n: int, minimum: int = MIN_SIDE) -> None:
    if n < minimum or n % 2:
        raise InvalidParameterError(f"grid side n={n} must be even and at least {minimum}")


@dataclass(frozen=True)
class Image:
    """Real-valued periodic n x n image."""

    pixels: np.ndarray

    def __post_init__(self):
        pixels = np.asarray(self.pixels)
        if pixels.ndim != 2 or pixels.shape[0] != pixels.shape[1]:
            raise InvalidParameterError(f"image must be square, got shape {pixels.shape}")
        _check_side(pixels.shape[0])
        if not np.all(np.isfinite(pixels)):
            raise InvalidParameterError("image contains non-finite values")
        object.__setattr__(self, "pixels", _frozen(pixels, np.float64))

    @property
    def n(self) -> int:
        return self.pixels.shape[0]

    def norm(self) -> float:
        return float(np.linalg.norm(self.pixels))

    def inner(self, other: "Image") -> float:
        _same_size(self.n, other.n)
        return float(np.vdot(self.pixels, other.pixels))

    def __add__(self, other: "Image") -> "Image":
        _same_size(self.n, other.n)
        return Image(self.pixels + other.pixels)

    def __sub__(self, other: "Image") -> "Image":
        _same_size(self.n, other.n)
        return Image(self.pixels - other.pixels)

    @classmethod
    def zeros(cls, n: int) -> "Image":
        return cls(np.zeros((n, n)))


@dataclass(frozen=True)
class Spectrum:
    """Complex n x n Fourier coefficients in unshifted storage order."""

    coeffs: np.ndarray

    def __post_init__(self):
        coeffs = np.asarray(self.coeffs)
        if coeffs.ndim != 2 or coeffs.shape[0] != coeffs.shape[1] or coeffs.shape[0] % 2:
            raise InvalidParameterError(f"spectrum must be square and even, got {coeffs.shape}")
        object.__setattr__(self, "coeffs", _frozen(coeffs, np.complex128))

    @property
    def n(self) -> int:
        return self.coeffs.shape[0]

    def at(self, k1: int, k2: int) -> complex:
        """Coefficient c_k at logical frequency k = (k1, k2)."""
        return complex(self.coeffs[k1 % self.n, k2 % self.n])

    def centered(self) -> np.ndarray:
        """DC-centered copy (DC at index (n/2, n/2))."""
        return fft.fftshift(self.coeffs)

    def norm(self) -> float:
        return float(np.linalg.norm(self.coeffs))

    def hermitian_defect(self) -> float:
        """||c - conj(c[-k])|| relative to ||c|| (0 for the zero spectrum)."""
        total = np.linalg.norm(self.coeffs)
        if total == 0:
            return 0.0
        return float(np.linalg.norm(self.coeffs - np.conj(mirror(self.coeffs))) / total)

    def check_hermitian(self, rtol: float | None = None) -> None:
        rtol = get_settings().hermitian_rtol if rtol is None else rtol
        defect = self.hermitian_defect()
        if defect > rtol:
            raise NonHermitianError(
                f"spectrum violates Hermitian symmetry (relative defect {defect:.3e} > {rtol:.1e})"
            )

    @classmethod
    def from_centered(cls, centered: np.ndarray) -> "Spectrum":
        return cls(fft.ifftshift(np.asarray(centered)))


@dataclass(frozen=True)
class FreqMask:
    """Symmetric, Nyquist-free set M of known Fourier coefficients."""

    known: np.ndarray

    def __post_init__(self):
        known = np.asarray(self.known, dtype=bool)
        if known.ndim != 2 or known.shape[0] != known.shape[1] or known.shape[0] % 2:
            raise InvalidParameterError(f"mask must be square and even, got {known.shape}")
        if np.any(known & nyquist_lines(known.shape[0])):
            raise InvalidParameterError("mask keeps Nyquist frequencies")
        if not np.array_equal(known, mirror(known)):
            raise InvalidParameterError("mask is not symmetric under k -> -k")
        object.__setattr__(self, "known", _frozen(known, bool))

    @property
    def n(self) -> int:
        return self.known.shape[0]

    @property
    def count(self) -> int:
        return int(self.known.sum())

    @property
    def mask_id(self) -> str:
        """Content hash identifying the mask (side length and kept set)."""
        digest = hashlib.sha256()
        digest.update(np.int64(self.n).tobytes())
        digest.update(np.packbits(self.known).tobytes())
        return digest.hexdigest()

    def contains(self, k1: int, k2: int) -> bool:
        return bool(self.known[k1 % self.n, k2 % self.n])

    def centered(self) -> np.ndarray:
        """DC-centered copy of the kept set."""
        return fft.fftshift(self.known)

    def complement_support(self) -> np.ndarray:
        """Boolean grid of the missing frequencies (Nyquist lines included)."""
        return ~self.known

    @classmethod
    def from_array(cls, known: np.ndarray, symmetrize: bool = True) -> "FreqMask":
        """
        Build a mask from an arbitrary boolean grid in unshifted order.

        Nyquist frequencies are cleared with a warning; asymmetric input is
        closed under k -> -k when ``symmetrize`` is set.
        """
        known = np.array(known, dtype=bool)
        nyquist = nyquist_lines(known.shape[0])
        if np.any(known & nyquist):
            logger.warning(
                f"Clearing {int((known & nyquist).sum())} Nyquist frequencies from mask"
            )
            known &= ~nyquist
        if symmetrize:
            known |= mirror(known)
        return cls(known)

    @classmethod
    def full(cls, n: int) -> "FreqMask":
        return cls(~nyquist_lines(n))

    @classmethod
    def dc_only(cls, n: int) -> "FreqMask":
        known = np.zeros((n, n), dtype=bool)
        known[0, 0] = True
        return cls(known)


def _same_size(a: int, b: int) -> None:
    if a != b:
        raise SizeMismatchError(f"grid sizes differ: {a} vs {b}")


def dft2(img: Image) -> Spectrum:
    """Unitary 2-D DFT of an image."""
    return Spectrum(fft.fft2(img.pixels, norm="ortho"))


def idft2(spec: Spectrum, rtol: float | None = None) -> Image:
    """Inverse of ``dft2``; the spectrum must be Hermitian."""
    spec.check_hermitian(rtol)
    return Image(fft.ifft2(spec.coeffs, norm="ortho").real)


def project_known_array(pixels: np.ndarray, known: np.ndarray) -> np.ndarray:
    """F^-1(chi_M F(pixels)) on raw arrays; known must be symmetric."""
    return fft.ifft2(fft.fft2(pixels) * known).real


def project_known(img: Image, m: FreqMask) -> Image:
    """Orthogonal projection onto the span of the known frequencies."""
    _same_size(img.n, m.n)
    return Image(project_known_array(img.pixels, m.known))


def project_missing(img: Image, m: FreqMask) -> Image:
    """Orthogonal projection onto the missing frequencies: img - project_known(img)."""
    _same_size(img.n, m.n)
    return Image(img.pixels - project_known_array(img.pixels, m.known))


def corrupt(img: Image, m: FreqMask) -> Image:
    """Corrupted observation g = F^-1(chi_M F(g0))."""
    return project_known(img, m)
