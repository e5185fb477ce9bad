"""
Unit tests for the TV operators, the TV prox and the constrained TV solver.
"""

import math

import numpy as np
import pytest

from src.models.params import TvConfig
from src.spectral.core import FreqMask, Image, corrupt, project_known
from src.tv.operators import divergence, gradient, tv_value
from src.tv.solver import prox_objective, solve_tv, tv_prox


class TestOperators:
    """Tests for periodic differences and TV."""

    def test_half_plane(self):
        """Test two horizontal edges of length 8 give TV 16."""
        pixels = np.zeros((8, 8))
        pixels[:4] = 1.0
        assert tv_value(Image(pixels)) == pytest.approx(16.0)

    def test_small_square(self):
        """Test a 2x2 square: six axis steps and one diagonal corner."""
        pixels = np.zeros((8, 8))
        pixels[2:4, 2:4] = 1.0
        assert tv_value(Image(pixels)) == pytest.approx(6.0 + math.sqrt(2.0))

    def test_naive_sum(self, rng):
        """Test TV against an explicit loop with wrap-around."""
        u = rng.standard_normal((8, 8))
        expected = 0.0
        for i in range(8):
            for j in range(8):
                d1 = u[(i + 1) % 8, j] - u[i, j]
                d2 = u[i, (j + 1) % 8] - u[i, j]
                expected += math.hypot(d1, d2)
        assert tv_value(Image(u)) == pytest.approx(expected)

    def test_divergence_is_negative_adjoint(self, rng):
        """Test <grad u, p> = -<u, div p>."""
        u = rng.standard_normal((8, 8))
        p1, p2 = rng.standard_normal((8, 8)), rng.standard_normal((8, 8))
        d1, d2 = gradient(u)
        assert np.sum(d1 * p1 + d2 * p2) == pytest.approx(-np.sum(u * divergence(p1, p2)))

    def test_constant_has_zero_tv(self):
        """Test constant images have zero TV."""
        assert tv_value(Image(np.full((8, 8), 4.2))) == 0.0


class TestTvProx:
    """Tests for the Chambolle proximal map."""

    def test_constant_fixed_point(self):
        """Test a constant input is returned unchanged."""
        f = np.full((8, 8), 3.0)
        u, _ = tv_prox(f, 2.0, 50)
        assert np.array_equal(u, f)

    def test_converges(self, rng):
        """Test a moderate run is within 1e-3 of a long run's objective."""
        f = rng.standard_normal((8, 8))
        short, _ = tv_prox(f, 1.0, 2000)
        long, _ = tv_prox(f, 1.0, 20000)
        best = prox_objective(long, f, 1.0)
        assert prox_objective(short, f, 1.0) == pytest.approx(best, rel=1e-3)
        assert best <= prox_objective(f, f, 1.0)
        assert best <= prox_objective(np.full_like(f, f.mean()), f, 1.0) + 1e-9

    def test_warm_start_continues(self, rng):
        """Test resuming from the returned dual equals one longer run."""
        f = rng.standard_normal((8, 8))
        half, dual = tv_prox(f, 0.5, 100)
        resumed, _ = tv_prox(f, 0.5, 100, dual=dual)
        full, _ = tv_prox(f, 0.5, 200)
        assert np.array_equal(resumed, full)

    def test_mean_preserved(self, rng):
        """Test the prox keeps the image mean."""
        f = rng.standard_normal((8, 8))
        u, _ = tv_prox(f, 1.0, 300)
        assert u.mean() == pytest.approx(f.mean(), abs=1e-12)


class TestSolveTv:
    """Tests for constrained TV restoration."""

    @pytest.fixture
    def tv_cfg(self):
        """Short TV run."""
        return TvConfig(outer_iters=60, inner_iters=10, dr_gamma=5.0)

    def test_constraint_holds(self, random_image, low_band_mask, tv_cfg):
        """Test the result keeps g's known coefficients."""
        g = corrupt(random_image, low_band_mask)
        result = solve_tv(g, low_band_mask, tv_cfg)
        kept = project_known(result.restored, low_band_mask)
        assert np.max(np.abs(kept.pixels - g.pixels)) < 1e-9 * 255

    def test_tv_does_not_increase(self, random_image, low_band_mask, tv_cfg):
        """Test the returned TV never exceeds TV(g)."""
        g = corrupt(random_image, low_band_mask)
        result = solve_tv(g, low_band_mask, tv_cfg)
        assert result.energy_trace[0] == pytest.approx(tv_value(g))
        assert tv_value(result.restored) <= tv_value(g) + 1e-9
        assert tv_value(result.restored) == pytest.approx(min(result.energy_trace))
        assert result.method == "tv"

    def test_full_mask(self, random_image, tv_cfg):
        """Test with every regular frequency known only the Nyquist lines can move."""
        mask = FreqMask.full(16)
        g = corrupt(random_image, mask)
        result = solve_tv(g, mask, tv_cfg)
        kept = project_known(result.restored, mask)
        assert np.max(np.abs(kept.pixels - g.pixels)) < 1e-9 * 255
        assert tv_value(result.restored) <= tv_value(g) + 1e-9

    def test_dc_only_flattens(self):
        """Test only the mean known: the TV minimizer is the constant image."""
        pixels = np.zeros((8, 8))
        pixels[:4] = 8.0
        mask = FreqMask.dc_only(8)
        g = corrupt(Image(pixels), mask)
        result = solve_tv(g, mask, TvConfig(outer_iters=20, inner_iters=5))
        assert np.allclose(result.restored.pixels, 4.0)

    @pytest.mark.parametrize("tau", [0.2, 0.25, 0.0])
    def test_tau_outside_convergent_range(self, tau):
        """Test dual steps outside (0, 1/8] are refused."""
        with pytest.raises(ValueError):
            TvConfig(tau=tau)

    def test_tau_at_limit(self):
        """Test the dual step 1/8 is accepted."""
        assert TvConfig(tau=0.125).tau == 0.125
