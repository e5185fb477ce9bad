"""
Real coordinates on a symmetric frequency support.

A real image whose spectrum lives on a symmetric set S is determined by
one real number per self-conjugate frequency (k = -k mod n) and by the
complex coefficient of one representative per conjugate pair {k, -k}.
Pairs are stored as sqrt(2)*Re and sqrt(2)*Im so that packing is an
isometry between the spectra supported on S and R^dof.
"""

import math
from dataclasses import dataclass, field
from typing import Optional

import numpy as np
from scipy import fft

from src.exceptions import InvalidParameterError, SizeMismatchError
from src.spectral.core import FreqMask, Spectrum, frequency_grid, mirror

SQRT2 = math.sqrt(2.0)


@dataclass(frozen=True)
class MaskBasis:
    """
    Ordered real parameterization of a symmetric support.

    Coordinate order: self-conjugate frequencies first (the DC entry for
    any FreqMask), then the cosine role of every pair representative,
    then the sine role in the same order.
    """

    mask: FreqMask
    complement: bool
    self_index: np.ndarray = field(repr=False)
    pair_index: np.ndarray = field(repr=False)
    partner_index: np.ndarray = field(repr=False)

    @property
    def n(self) -> int:
        return self.mask.n

    @property
    def dof(self) -> int:
        return self.self_index.size + 2 * self.pair_index.size

    @property
    def coordinates(self) -> list[tuple[tuple[int, int], str]]:
        """(frequency, role) for every real coordinate, in packing order."""
        k1, k2 = frequency_grid(self.n)
        k1, k2 = k1.ravel(), k2.ravel()
        roles: list[tuple[tuple[int, int], str]] = []
        for idx in self.self_index:
            roles.append(((int(k1[idx]), int(k2[idx])), "dc" if idx == 0 else "real"))
        for role in ("cos", "sin"):
            for idx in self.pair_index:
                roles.append(((int(k1[idx]), int(k2[idx])), role))
        return roles

    @classmethod
    def for_mask(cls, mask: FreqMask) -> "MaskBasis":
        """Coordinates on the known subspace M."""
        return cls._build(mask, mask.known, complement=False)

    @classmethod
    def for_complement(cls, mask: FreqMask) -> "MaskBasis":
        """Coordinates on the missing subspace (Nyquist frequencies included)."""
        return cls._build(mask, mask.complement_support(), complement=True)

    @classmethod
    def _build(cls, mask: FreqMask, support: np.ndarray, complement: bool) -> "MaskBasis":
        n = mask.n
        flat = np.arange(n * n).reshape(n, n)
        partner = mirror(flat)
        self_conj = support & (flat == partner)
        reps = support & (flat < partner)
        self_index = np.flatnonzero(self_conj)
        pair_index = np.flatnonzero(reps)
        partner_index = partner.ravel()[pair_index]
        for array in (self_index, pair_index, partner_index):
            array.setflags(write=False)
        return cls(
            mask=mask,
            complement=complement,
            self_index=self_index,
            pair_index=pair_index,
            partner_index=partner_index,
        )

    def pack_coeffs(self, coeffs: np.ndarray) -> np.ndarray:
        """Real coordinates of a Hermitian coefficient array (no symmetry check)."""
        flat = coeffs.reshape(-1)
        reps = flat[self.pair_index]
        return np.concatenate(
            [flat[self.self_index].real, SQRT2 * reps.real, SQRT2 * reps.imag]
        )

    def unpack_coeffs(self, vec: np.ndarray) -> np.ndarray:
        """Hermitian coefficient array supported on the basis support."""
        vec = np.asarray(vec, dtype=np.float64)
        if vec.shape != (self.dof,):
            raise SizeMismatchError(f"expected {self.dof} coordinates, got {vec.shape}")
        s, p = self.self_index.size, self.pair_index.size
        coeffs = np.zeros(self.n * self.n, dtype=np.complex128)
        coeffs[self.self_index] = vec[:s]
        pairs = (vec[s : s + p] + 1j * vec[s + p :]) / SQRT2
        coeffs[self.pair_index] = pairs
        coeffs[self.partner_index] = np.conj(pairs)
        return coeffs.reshape(self.n, self.n)

    def to_pixels(self, vec: np.ndarray) -> np.ndarray:
        """Real image whose unitary spectrum is ``unpack(vec)``."""
        return fft.ifft2(self.unpack_coeffs(vec), norm="ortho").real

    def from_pixels(self, pixels: np.ndarray) -> np.ndarray:
        """Coordinates of the projection of a real image onto the support."""
        return self.pack_coeffs(fft.fft2(pixels, norm="ortho"))


def pack(spec: Spectrum, basis: MaskBasis, rtol: Optional[float] = None) -> np.ndarray:
    """Real coordinates of spec restricted to the basis support."""
    if spec.n != basis.n:
        raise SizeMismatchError(f"spectrum side {spec.n} does not match basis side {basis.n}")
    spec.check_hermitian(rtol)
    return basis.pack_coeffs(spec.coeffs)


def unpack(vec: np.ndarray, basis: MaskBasis) -> Spectrum:
    """Spectrum with the given coordinates on the support and zeros elsewhere."""
    return Spectrum(basis.unpack_coeffs(vec))


def require_dof(basis: MaskBasis, count: int) -> None:
    if count > basis.dof:
        raise InvalidParameterError(
            f"requested {count} vectors but the subspace has only {basis.dof} real dimensions"
        )
