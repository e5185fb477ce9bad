"""
Moment weights and the matrix-free quadratic form of the atom problem.

The p-moment of an image phi is sum_x w(x) phi(x)^2 with w(x) = ||x||_2^p,
x measured from the logical origin (array index (0, 0)) in the periodic
box [-1/2, 1/2)^2. On the known subspace M this is the quadratic form
<v, A v> with A = pack . F . diag(w) . F^-1 . unpack.
"""

from dataclasses import dataclass

import numpy as np
from scipy import fft

from src.exceptions import InvalidParameterError, SizeMismatchError
from src.spectral.basis import MaskBasis


@dataclass(frozen=True)
class MomentWeight:
    """w(x) = ||x||^p stored origin-at-(0, 0)."""

    p: float
    weights: np.ndarray

    @property
    def n(self) -> int:
        return self.weights.shape[0]

    @property
    def norm_estimate(self) -> float:
        """Upper bound of the form's operator norm (max of w)."""
        return float(self.weights.max())

    def centered(self) -> np.ndarray:
        """View with the origin at display pixel (n/2, n/2)."""
        return fft.fftshift(self.weights)


def moment_weights(n: int, p: float) -> MomentWeight:
    """Centered periodic coordinates raised to the p-th power of their norm."""
    if p <= 1:
        raise InvalidParameterError(f"moment exponent p={p} must exceed 1")
    if n < 2 or n % 2:
        raise InvalidParameterError(f"grid side n={n} must be even")
    coords = np.fft.fftfreq(n)
    x1, x2 = np.meshgrid(coords, coords, indexing="ij")
    weights = np.hypot(x1, x2) ** p
    weights.setflags(write=False)
    return MomentWeight(p=float(p), weights=weights)


def apply_form(v: np.ndarray, basis: MaskBasis, w: MomentWeight) -> np.ndarray:
    """A v for the moment form restricted to the basis support."""
    v = np.asarray(v, dtype=np.float64)
    if v.shape != (basis.dof,):
        raise SizeMismatchError(f"expected a vector of length {basis.dof}, got {v.shape}")
    if w.n != basis.n:
        raise SizeMismatchError(f"weights side {w.n} does not match basis side {basis.n}")
    return basis.from_pixels(w.weights * basis.to_pixels(v))


def assemble_form(basis: MaskBasis, w: MomentWeight) -> np.ndarray:
    """Dense symmetric matrix of the form, assembled column by column."""
    columns = np.empty((basis.dof, basis.dof))
    unit = np.zeros(basis.dof)
    for i in range(basis.dof):
        unit[i] = 1.0
        columns[:, i] = apply_form(unit, basis, w)
        unit[i] = 0.0
    return 0.5 * (columns + columns.T)
