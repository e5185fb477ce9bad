"""
Unit tests for scenes, Born far-field synthesis, gridding and noise.
"""

import math

import numpy as np
import pytest

from src.exceptions import ConfigError, InvalidParameterError
from src.models.scene import DiskShape, RectShape, ScatterScene, wavelength_grid_scale
from src.scatter.born import FarFieldData, FarFieldModel, add_noise, far_field, grid_far_field
from src.scatter.scene import (
    bars_scene,
    disks_scene,
    format_scene,
    parse_scene,
    parse_wave_number,
    render_scene,
)
from src.spectral.core import FreqMask, Spectrum, dft2

EAST = np.array([[1.0, 0.0]])
WEST = np.array([[-1.0, 0.0]])
NORTH = np.array([[0.0, 1.0]])
SOUTH = np.array([[0.0, -1.0]])


@pytest.fixture
def disk_scene():
    """One off-center disk on a 16x16 grid with index units equal to physical ones."""
    return ScatterScene(
        n=16,
        shapes=[DiskShape(cx=0.4, cy=0.55, r=0.2, amp=3.0)],
        k_wave=math.pi,
        grid_scale=2.0,
    )


class TestWaveNumber:
    """Tests for wave-number parsing."""

    @pytest.mark.parametrize(
        "text,expected",
        [("3pi", 3 * math.pi), ("2.5*pi", 2.5 * math.pi), ("pi", math.pi), ("9.42", 9.42)],
    )
    def test_valid(self, text, expected):
        """Test accepted spellings."""
        assert parse_wave_number(text) == pytest.approx(expected)

    @pytest.mark.parametrize("text", ["", "abc", "0", "0pi"])
    def test_invalid(self, text):
        """Test empty, garbage and zero wave numbers are refused."""
        with pytest.raises(InvalidParameterError):
            parse_wave_number(text)


class TestScenes:
    """Tests for scene rendering and the scene text format."""

    def test_round_trip(self):
        """Test format then parse reproduces the shapes."""
        scene = disks_scene(64)
        back = parse_scene(format_scene(scene), 64, scene.k_wave)
        assert back.shapes == scene.shapes

    def test_comments_and_defaults(self):
        """Test comments are skipped and amplitude defaults to 1."""
        text = "# scene\n\ndisk 0.5 0.5 0.25  # middle\nrect 0 0 0.5 0.5 2\n"
        scene = parse_scene(text, 16, math.pi)
        assert len(scene.shapes) == 2
        assert scene.shapes[0].amp == 1.0 and scene.shapes[1].amp == 2.0

    def test_unknown_shape(self):
        """Test unknown shapes are a config error."""
        with pytest.raises(ConfigError):
            parse_scene("triangle 0 0 1", 16, math.pi)

    def test_disk_outside_square(self):
        """Test disks leaving the unit square are refused."""
        with pytest.raises(ConfigError):
            parse_scene("disk 0.1 0.5 0.3", 16, math.pi)

    def test_empty_scene(self):
        """Test an empty scene renders to zeros."""
        scene = ScatterScene(n=16, k_wave=math.pi)
        assert np.all(render_scene(scene).pixels == 0)

    def test_full_square(self):
        """Test a unit-square rectangle fills every pixel."""
        scene = ScatterScene(n=16, shapes=[RectShape(x0=0, y0=0, x1=1, y1=1, amp=2.0)], k_wave=1.0)
        assert np.all(render_scene(scene).pixels == 2.0)

    def test_overlaps_add(self):
        """Test overlapping shapes add their amplitudes."""
        shapes = [
            RectShape(x0=0, y0=0, x1=0.5, y1=1, amp=1.0),
            RectShape(x0=0.25, y0=0, x1=0.75, y1=1, amp=2.0),
        ]
        pixels = render_scene(ScatterScene(n=16, shapes=shapes, k_wave=1.0)).pixels
        assert pixels[5, 0] == 3.0 and pixels[1, 0] == 1.0 and pixels[10, 0] == 2.0

    def test_bars_geometry(self):
        """Test four bars of width 4 separated by 6-pixel gaps."""
        pixels = render_scene(bars_scene(128, separation=6)).pixels
        row = np.flatnonzero(pixels[64])
        assert len(row) == 16
        steps = np.diff(row)
        assert sorted(set(steps.tolist())) == [1, 7]
        assert np.count_nonzero(steps == 7) == 3
        assert np.all(pixels[64, row] == 255.0)

    def test_wavelength_grid_scale(self):
        """Test 32/3 pixels per wavelength at k=3pi gives a grid side of 8 units."""
        assert wavelength_grid_scale(128, 3 * math.pi, 32 / 3) == pytest.approx(8.0)
        scene = ScatterScene(n=128, k_wave=3 * math.pi, grid_scale=8.0)
        assert scene.wavelength * scene.n / scene.effective_grid_scale == pytest.approx(32 / 3)

    def test_bars_do_not_fit(self):
        """Test too-wide bar layouts are refused."""
        with pytest.raises(InvalidParameterError):
            bars_scene(32, separation=10)


class TestFarField:
    """Tests for Born far-field samples."""

    def test_forward_scattering_is_total_mass(self, disk_scene):
        """Test x_hat = d samples q = 0, the sum of chi."""
        data = far_field(disk_scene, dirs_in=EAST, dirs_out=EAST)
        assert data.count == 1
        assert data.values[0] == pytest.approx(render_scene(disk_scene).pixels.sum())

    @pytest.mark.parametrize("model", [FarFieldModel.PIXEL, FarFieldModel.CONTINUOUS])
    def test_conjugate_symmetry(self, disk_scene, model):
        """Test swapping incidence and observation conjugates the sample."""
        forward = far_field(disk_scene, dirs_in=EAST, dirs_out=NORTH, model=model)
        backward = far_field(disk_scene, dirs_in=NORTH, dirs_out=EAST, model=model)
        assert np.allclose(backward.q, -forward.q)
        assert backward.values[0] == pytest.approx(np.conj(forward.values[0]))

    def test_centered_disk_is_radial(self):
        """Test the analytic disk transform depends only on |q| up to phase."""
        scene = ScatterScene(n=32, shapes=[DiskShape(cx=0.5, cy=0.5, r=0.2)], k_wave=math.pi)
        data = far_field(
            scene,
            dirs_in=EAST,
            dirs_out=np.vstack([NORTH, SOUTH]),
            model=FarFieldModel.CONTINUOUS,
        )
        assert abs(data.values[0]) == pytest.approx(abs(data.values[1]), rel=1e-12)

    def test_models_agree_at_low_frequency(self):
        """Test the continuous and pixel models are close at q = 0."""
        scene = ScatterScene(n=64, shapes=[DiskShape(cx=0.5, cy=0.5, r=0.3)], k_wave=math.pi)
        pixel = far_field(scene, dirs_in=EAST, dirs_out=EAST)
        continuous = far_field(scene, dirs_in=EAST, dirs_out=EAST, model=FarFieldModel.CONTINUOUS)
        assert continuous.values[0] == pytest.approx(pixel.values[0], rel=0.02)

    def test_on_grid_samples_match_dft(self, disk_scene):
        """Test samples at integer indices are n times the unitary DFT."""
        data = far_field(disk_scene, dirs_in=EAST, dirs_out=np.vstack([WEST, NORTH]))
        assert np.allclose(data.freq, [[-2.0, 0.0], [-1.0, 1.0]])
        spectrum = dft2(render_scene(disk_scene))
        assert data.values[0] / 16 == pytest.approx(spectrum.at(-2, 0))
        assert data.values[1] / 16 == pytest.approx(spectrum.at(-1, 1))

    def test_gridded_spectrum_matches_dft(self, disk_scene):
        """Test gridding on-grid samples reproduces the DFT on the hit cells."""
        data = far_field(disk_scene, dirs_in=EAST, dirs_out=np.vstack([WEST, NORTH]))
        spec, mask = grid_far_field(data, 16)
        truth = dft2(render_scene(disk_scene)).coeffs
        assert mask.count == 4
        assert np.allclose(spec.coeffs[mask.known], truth[mask.known], atol=1e-10)
        assert np.all(spec.coeffs[~mask.known] == 0)


class TestGridding:
    """Tests for nearest-cell gridding."""

    def test_collisions_average(self):
        """Test two samples in one cell are averaged."""
        data = FarFieldData(
            q=np.zeros((2, 2)), freq=np.array([[1.2, 0.0], [0.9, 0.0]]), values=np.array([32.0, 64.0])
        )
        spec, mask = grid_far_field(data, 16)
        assert mask.contains(1, 0) and mask.contains(-1, 0) and mask.count == 2
        assert spec.at(1, 0) == pytest.approx(3.0)
        assert spec.at(-1, 0) == pytest.approx(3.0)

    def test_mirror_pairs_averaged(self):
        """Test c(k) and conj(c(-k)) are averaged into a Hermitian pair."""
        data = FarFieldData(
            q=np.zeros((2, 2)),
            freq=np.array([[2.0, 0.0], [-2.0, 0.0]]),
            values=np.array([16 * (1 + 1j), 16 * (3 + 1j)]),
        )
        spec, _ = grid_far_field(data, 16)
        assert spec.at(2, 0) == pytest.approx(2.0)
        assert spec.at(-2, 0) == pytest.approx(2.0)

    def test_outside_samples_dropped(self):
        """Test samples beyond n/2 - 1 are discarded."""
        data = FarFieldData(
            q=np.zeros((2, 2)), freq=np.array([[100.0, 0.0], [1.0, 1.0]]), values=np.array([1.0, 16.0])
        )
        spec, mask = grid_far_field(data, 16)
        assert mask.count == 2
        assert spec.at(1, 1) == pytest.approx(1.0)

    def test_hermitian_output(self, rng):
        """Test arbitrary samples grid to a Hermitian spectrum."""
        freq = rng.uniform(-7, 7, size=(40, 2))
        values = rng.standard_normal(40) + 1j * rng.standard_normal(40)
        spec, _ = grid_far_field(FarFieldData(q=freq, freq=freq, values=values), 16)
        assert spec.hermitian_defect() < 1e-12

    def test_stock_scene_fills_scattering_mask(self):
        """Test the default 32-direction setup lands inside the grid."""
        data = far_field(disks_scene(64))
        spec, mask = grid_far_field(data, 64)
        assert data.count == 32 * 32
        assert mask.contains(0, 0)
        assert spec.hermitian_defect() < 1e-12


class TestNoise:
    """Tests for relative Hermitian noise."""

    def test_exact_norm(self, low_band_mask):
        """Test the perturbation norm equals sigma times the reference norm."""
        spec = Spectrum(np.zeros((16, 16), dtype=complex))
        noisy = add_noise(spec, low_band_mask, 0.1, seed=3, reference_norm=50.0)
        assert np.linalg.norm(noisy.coeffs - spec.coeffs) == pytest.approx(5.0, rel=1e-12)

    def test_noise_on_mask_and_hermitian(self, low_band_mask):
        """Test noise stays on the mask and keeps the spectrum Hermitian."""
        spec = Spectrum(np.zeros((16, 16), dtype=complex))
        noisy = add_noise(spec, low_band_mask, 0.5, seed=1, reference_norm=10.0)
        assert np.all(noisy.coeffs[~low_band_mask.known] == 0)
        assert noisy.hermitian_defect() < 1e-12

    def test_zero_sigma(self, low_band_mask):
        """Test sigma = 0 leaves the spectrum unchanged."""
        spec = Spectrum(np.ones((16, 16), dtype=complex))
        assert add_noise(spec, low_band_mask, 0.0) is spec

    def test_seeded(self, low_band_mask):
        """Test equal seeds give equal noise."""
        spec = Spectrum(np.zeros((16, 16), dtype=complex))
        a = add_noise(spec, low_band_mask, 0.2, seed=9, reference_norm=1.0)
        b = add_noise(spec, low_band_mask, 0.2, seed=9, reference_norm=1.0)
        assert np.array_equal(a.coeffs, b.coeffs)

    def test_negative_sigma(self, low_band_mask):
        """Test negative noise levels are refused."""
        with pytest.raises(InvalidParameterError):
            add_noise(Spectrum(np.zeros((16, 16), dtype=complex)), FreqMask.dc_only(16), -0.1)
