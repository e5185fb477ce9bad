"""
Unit tests for images, spectra, masks, transforms and the real mask basis.
"""

import math

import numpy as np
import pytest

from src.exceptions import GridFormatError, InvalidParameterError, NonHermitianError
from src.spectral.basis import MaskBasis, pack, unpack
from src.spectral.core import (
    FreqMask,
    Image,
    Spectrum,
    dft2,
    idft2,
    nyquist_lines,
    project_known,
    project_missing,
)
from src.spectral.io import decode_grid, encode_grid, read_grid, write_grid


def direct_dft(pixels: np.ndarray) -> np.ndarray:
    """O(n^4) unitary DFT sum."""
    n = pixels.shape[0]
    idx = np.arange(n)
    out = np.zeros((n, n), dtype=np.complex128)
    for k1 in range(n):
        for k2 in range(n):
            phase = np.exp(-2j * math.pi * (k1 * idx[:, None] + k2 * idx[None, :]) / n)
            out[k1, k2] = np.sum(pixels * phase) / n
    return out


def strip_nyquist(pixels: np.ndarray) -> Image:
    coeffs = np.fft.fft2(pixels)
    coeffs[nyquist_lines(pixels.shape[0])] = 0
    return Image(np.fft.ifft2(coeffs).real)


class TestImageTypes:
    """Tests for value-type validation."""

    def test_image_is_read_only(self, random_image):
        """Test that image pixels cannot be modified in place."""
        with pytest.raises(ValueError):
            random_image.pixels[0, 0] = 1.0

    def test_image_rejects_odd_side(self):
        """Test that odd side lengths are refused."""
        with pytest.raises(InvalidParameterError):
            Image(np.zeros((9, 9)))

    def test_image_rejects_non_finite(self):
        """Test that NaN pixels are refused."""
        pixels = np.zeros((8, 8))
        pixels[2, 3] = np.nan
        with pytest.raises(InvalidParameterError):
            Image(pixels)

    def test_mask_rejects_asymmetry(self):
        """Test that an asymmetric grid is not a valid mask."""
        known = np.zeros((8, 8), dtype=bool)
        known[1, 0] = True
        with pytest.raises(InvalidParameterError):
            FreqMask(known)

    def test_from_array_clears_nyquist_and_symmetrizes(self):
        """Test that from_array removes Nyquist cells and closes under k -> -k."""
        known = np.zeros((8, 8), dtype=bool)
        known[4, 0] = True
        known[1, 2] = True
        mask = FreqMask.from_array(known)
        assert not mask.contains(4, 0)
        assert mask.contains(1, 2) and mask.contains(-1, -2)
        assert mask.count == 2

    def test_full_mask_excludes_nyquist(self):
        """Test the full mask keeps everything but the Nyquist lines."""
        mask = FreqMask.full(8)
        assert mask.count == 7 * 7


class TestTransforms:
    """Tests for dft2 and idft2."""

    def test_constant_image(self):
        """Test DC equals n times the mean for a constant image."""
        spectrum = dft2(Image(np.ones((8, 8))))
        assert spectrum.at(0, 0) == pytest.approx(8.0)
        rest = spectrum.coeffs.copy()
        rest[0, 0] = 0
        assert np.max(np.abs(rest)) < 1e-12

    def test_single_cosine(self):
        """Test a cosine along x1 lands on (+-3, 0) only."""
        i = np.arange(16)
        pixels = np.cos(2 * math.pi * 3 * i / 16)[:, None] * np.ones(16)[None, :]
        spectrum = dft2(Image(pixels))
        assert spectrum.at(3, 0) == pytest.approx(8.0)
        assert spectrum.at(-3, 0) == pytest.approx(8.0)
        rest = spectrum.coeffs.copy()
        rest[3, 0] = rest[-3, 0] = 0
        assert np.max(np.abs(rest)) < 1e-12

    def test_isometry(self, rng):
        """Test the unitary transform preserves the l2 norm."""
        img = Image(rng.standard_normal((8, 8)))
        assert dft2(img).norm() == pytest.approx(img.norm(), rel=1e-12)

    def test_matches_direct_sum(self, rng):
        """Test dft2 against the direct DFT sum."""
        pixels = rng.standard_normal((8, 8))
        assert np.max(np.abs(dft2(Image(pixels)).coeffs - direct_dft(pixels))) < 1e-10

    def test_round_trip(self, rng):
        """Test idft2 inverts dft2."""
        img = Image(rng.standard_normal((8, 8)))
        back = idft2(dft2(img))
        assert np.allclose(back.pixels, img.pixels, rtol=0, atol=1e-12)

    def test_pair_gives_cosine(self):
        """Test c(1,0) = c(-1,0) = 1 yields a cosine along x1."""
        coeffs = np.zeros((8, 8), dtype=complex)
        coeffs[1, 0] = coeffs[-1, 0] = 1.0
        img = idft2(Spectrum(coeffs))
        expected = 2 / 8 * np.cos(2 * math.pi * np.arange(8) / 8)[:, None] * np.ones(8)[None, :]
        assert np.allclose(img.pixels, expected, atol=1e-12)

    def test_broken_symmetry_raises(self):
        """Test a non-Hermitian spectrum cannot become a real image."""
        coeffs = np.zeros((8, 8), dtype=complex)
        coeffs[1, 0] = 1.0
        with pytest.raises(NonHermitianError):
            idft2(Spectrum(coeffs))


class TestProjections:
    """Tests for the known/missing projections."""

    def test_full_mask_is_identity(self, rng):
        """Test the full mask leaves Nyquist-free images unchanged."""
        img = strip_nyquist(rng.standard_normal((16, 16)))
        out = project_known(img, FreqMask.full(16))
        assert np.allclose(out.pixels, img.pixels, atol=1e-12)
        assert project_missing(img, FreqMask.full(16)).norm() < 1e-12

    def test_dc_mask_keeps_constant(self):
        """Test the DC-only mask keeps a constant image."""
        img = Image(np.full((8, 8), 3.5))
        assert np.allclose(project_known(img, FreqMask.dc_only(8)).pixels, 3.5)

    def test_idempotent(self, random_image, low_band_mask):
        """Test P_M applied twice equals P_M."""
        once = project_known(random_image, low_band_mask)
        twice = project_known(once, low_band_mask)
        assert np.max(np.abs(once.pixels - twice.pixels)) < 1e-12 * 255

    def test_decomposition(self, random_image, low_band_mask):
        """Test P_M x + P_M-perp x = x."""
        total = project_known(random_image, low_band_mask) + project_missing(
            random_image, low_band_mask
        )
        assert np.max(np.abs(total.pixels - random_image.pixels)) < 1e-12 * 255

    def test_orthogonality(self, rng, low_band_mask):
        """Test known and missing parts are orthogonal."""
        x = Image(rng.standard_normal((16, 16)))
        y = Image(rng.standard_normal((16, 16)))
        inner = project_known(x, low_band_mask).inner(project_missing(y, low_band_mask))
        assert abs(inner) < 1e-10

    def test_self_adjoint(self, rng, low_band_mask):
        """Test <P x, y> = <x, P y>."""
        x = Image(rng.standard_normal((16, 16)))
        y = Image(rng.standard_normal((16, 16)))
        left = project_known(x, low_band_mask).inner(y)
        right = x.inner(project_known(y, low_band_mask))
        assert left == pytest.approx(right, abs=1e-10)


class TestMaskBasis:
    """Tests for pack/unpack on a symmetric support."""

    def test_dc_only(self):
        """Test the DC-only mask packs to the DC value."""
        coeffs = np.zeros((8, 8), dtype=complex)
        coeffs[0, 0] = 5.0
        vec = pack(Spectrum(coeffs), MaskBasis.for_mask(FreqMask.dc_only(8)))
        assert vec.tolist() == [5.0]

    def test_pair_coordinates(self):
        """Test a conjugate pair packs to sqrt(2) times its real and imaginary parts."""
        known = np.zeros((8, 8), dtype=bool)
        known[1, 0] = known[-1, 0] = True
        basis = MaskBasis.for_mask(FreqMask(known))
        coeffs = np.zeros((8, 8), dtype=complex)
        coeffs[1, 0] = 2.0 + 3.0j
        coeffs[-1, 0] = 2.0 - 3.0j
        vec = pack(Spectrum(coeffs), basis)
        assert np.allclose(vec, [math.sqrt(2) * 2.0, math.sqrt(2) * 3.0])

    def test_dof(self, low_band_mask):
        """Test dof counts DC once and every other kept frequency once."""
        basis = MaskBasis.for_mask(low_band_mask)
        assert basis.dof == low_band_mask.count
        assert len(basis.coordinates) == basis.dof
        assert basis.coordinates[0] == ((0, 0), "dc")

    def test_round_trip_and_isometry(self, rng, low_band_mask):
        """Test unpack(pack(s)) reproduces s on M and preserves its norm."""
        img = project_known(Image(rng.standard_normal((16, 16))), low_band_mask)
        spec = dft2(img)
        basis = MaskBasis.for_mask(low_band_mask)
        vec = pack(spec, basis)
        back = unpack(vec, basis)
        assert np.max(np.abs(back.coeffs - spec.coeffs)) < 1e-12
        assert np.linalg.norm(vec) == pytest.approx(spec.norm(), rel=1e-12)

    def test_complement_covers_everything_else(self, low_band_mask):
        """Test the complement basis spans every missing frequency, Nyquist included."""
        basis = MaskBasis.for_complement(low_band_mask)
        assert basis.dof == 16 * 16 - low_band_mask.count


class TestGridFiles:
    """Tests for SFG1 grid files."""

    def test_round_trip_is_bit_exact(self, tmp_path, rng):
        """Test write/read reproduces every float64 bit."""
        img = Image(rng.standard_normal((8, 8)) * 1e3)
        back = read_grid(write_grid(img, tmp_path / "a.sfg1"))
        assert np.array_equal(back.pixels, img.pixels)

    def test_bad_magic(self, random_image):
        """Test a corrupted header is rejected."""
        payload = b"XXXX" + encode_grid(random_image)[4:]
        with pytest.raises(GridFormatError):
            decode_grid(payload)

    def test_truncated_payload(self, random_image):
        """Test a short payload is rejected."""
        with pytest.raises(GridFormatError):
            decode_grid(encode_grid(random_image)[:-8])

    def test_missing_file(self, tmp_path):
        """Test a missing file raises a format error."""
        with pytest.raises(GridFormatError):
            read_grid(tmp_path / "absent.sfg1")
