"""
Unit tests for the non-local operator, CG, IRLS and restoration schedules.
"""

import numpy as np
import pytest

from src.exceptions import InvalidParameterError, InvalidScheduleError
from src.masks.generators import band_mask
from src.models.params import (
    BandNorm,
    BandSpec,
    ConstraintMode,
    GraphParams,
    MetricKind,
    PatchWindow,
    SolverConfig,
)
from src.similarity.distances import patch_offsets
from src.similarity.graph import PatchGraph, build_graph
from src.solver.cg import conjugate_gradient
from src.solver.irls import smoothing_floor, solve_l1
from src.solver.operator import NonLocalOperator, energy, window_weights
from src.solver.quadratic import solve_quadratic
from src.solver.schedule import parse_schedule, restore_iterated, solve, validate_schedule
from src.spectral.core import Image, corrupt, project_known


def manual_graph(n, pairs, weights, rho=3):
    """Graph with hand-picked edges."""
    params = GraphParams(eta=max(rho, 10), rho=rho, eps=1, m0=1, h=100.0, metric=MetricKind.ORACLE)
    return PatchGraph(
        n=n,
        params=params,
        src=np.array([p[0] for p in pairs]),
        dst=np.array([p[1] for p in pairs]),
        delta=np.zeros(len(pairs)),
        weight=np.array(weights, dtype=float),
    )


@pytest.fixture
def small_graph(random_image):
    """SSD graph of the random 16x16 image."""
    params = GraphParams(eta=4, rho=3, eps=2, m0=3, h=200.0, metric=MetricKind.SSD)
    return build_graph(random_image, params)


@pytest.fixture
def cfg():
    """Tight quadratic solver settings for rho = 3."""
    return SolverConfig(rho=3, cg_tol=1e-10, cg_max_iter=2000)


class TestOperator:
    """Tests for the patch-difference operator."""

    def test_energy_matches_naive_sum(self, rng):
        """Test the sparse energy against explicit loops."""
        u = rng.standard_normal((8, 8))
        graph = manual_graph(8, [((0, 0), (2, 4)), ((7, 7), (3, 1))], [0.5, 2.0])
        expected = 0.0
        for ((k1, k2), (l1, l2)), w in zip([((0, 0), (2, 4)), ((7, 7), (3, 1))], [0.5, 2.0]):
            for t1, t2 in patch_offsets(3):
                a = u[(k1 + t1) % 8, (k2 + t2) % 8]
                b = u[(l1 + t1) % 8, (l2 + t2) % 8]
                expected += w * (a - b) ** 2
        op = NonLocalOperator(graph, 3)
        assert op.energy(u) == pytest.approx(expected, rel=1e-12)

    def test_constant_patch_against_zero(self):
        """Test a patch of height c against a zero patch costs w rho^2 c^2."""
        pixels = np.zeros((16, 16))
        pixels[0:2, 0:2] = 3.0
        pixels[-1, :2] = pixels[:2, -1] = pixels[-1, -1] = 3.0
        graph = manual_graph(16, [((0, 0), (8, 8))], [0.5])
        assert energy(Image(pixels), graph, SolverConfig(rho=3)) == pytest.approx(0.5 * 9 * 9.0)

    def test_gradient_matches_finite_differences(self, rng, small_graph):
        """Test the analytic gradient against central differences."""
        op = NonLocalOperator(small_graph, 3)
        u = rng.standard_normal((16, 16))
        d = rng.standard_normal((16, 16))
        h = 1e-4
        numeric = (op.energy(u + h * d) - op.energy(u - h * d)) / (2 * h)
        assert np.sum(op.gradient(u) * d) == pytest.approx(numeric, rel=1e-6)

    def test_hessian_symmetric_psd(self, rng, small_graph):
        """Test <H x, y> = <x, H y> and <H x, x> >= 0."""
        op = NonLocalOperator(small_graph, 3)
        x = rng.standard_normal((16, 16))
        y = rng.standard_normal((16, 16))
        assert np.sum(op.hessian_apply(x) * y) == pytest.approx(np.sum(x * op.hessian_apply(y)))
        assert np.sum(op.hessian_apply(x) * x) >= 0.0

    def test_energy_is_quadratic_form(self, rng, small_graph):
        """Test E(u) = <H u, u> / 2."""
        op = NonLocalOperator(small_graph, 3)
        u = rng.standard_normal((16, 16))
        assert op.energy(u) == pytest.approx(0.5 * np.sum(op.hessian_apply(u) * u))

    def test_hann_window(self):
        """Test the Hann window peaks at 1 in the center and stays positive."""
        weights = window_weights(5, PatchWindow.HANN).reshape(5, 5)
        assert weights[2, 2] == pytest.approx(1.0)
        assert weights.min() > 0 and weights[0, 0] < weights[1, 1]

    def test_indicator_window(self):
        """Test the indicator window is all ones."""
        assert np.all(window_weights(3, PatchWindow.INDICATOR) == 1.0)


class TestConjugateGradient:
    """Tests for the CG kernel."""

    def test_spd_system(self, rng):
        """Test CG solves a small SPD system."""
        a = rng.standard_normal((10, 10))
        matrix = a @ a.T + 10 * np.eye(10)
        b = rng.standard_normal(10)
        outcome = conjugate_gradient(lambda x: matrix @ x, b, tol=1e-12, max_iter=100)
        assert outcome.converged
        assert np.allclose(outcome.x, np.linalg.solve(matrix, b), atol=1e-8)

    def test_zero_rhs(self):
        """Test a zero right-hand side returns the zero vector at once."""
        outcome = conjugate_gradient(lambda x: 2 * x, np.zeros(5))
        assert outcome.iterations == 0 and outcome.converged
        assert np.all(outcome.x == 0)

    def test_iteration_cap(self, rng):
        """Test hitting the cap is reported as non-convergence."""
        a = rng.standard_normal((30, 30))
        matrix = a @ a.T + np.eye(30)
        outcome = conjugate_gradient(lambda x: matrix @ x, rng.standard_normal(30), tol=1e-14, max_iter=2)
        assert outcome.iterations == 2 and not outcome.converged

    def test_callback(self, rng):
        """Test every iterate is reported."""
        seen = []
        conjugate_gradient(lambda x: 3 * x, rng.standard_normal(4), on_iterate=lambda x: seen.append(x.copy()))
        assert len(seen) == 1


class TestQuadraticSolver:
    """Tests for alpha = 2 restoration."""

    def test_constraint_preserved(self, random_image, low_band_mask, small_graph, cfg):
        """Test the restoration keeps the known coefficients of g."""
        g = corrupt(random_image, low_band_mask)
        result = solve_quadratic(g, low_band_mask, small_graph, cfg)
        kept = project_known(result.restored, low_band_mask)
        assert np.max(np.abs(kept.pixels - g.pixels)) < 1e-9 * 255

    def test_energy_trace_decreases(self, random_image, low_band_mask, small_graph, cfg):
        """Test CG energies never increase."""
        g = corrupt(random_image, low_band_mask)
        trace = np.array(solve_quadratic(g, low_band_mask, small_graph, cfg).energy_trace)
        assert np.all(np.diff(trace) <= 1e-9 * trace[0])
        assert trace[-1] < trace[0]

    def test_modes_agree(self, random_image, low_band_mask, small_graph, cfg):
        """Test packed and projection modes reach the same energy."""
        g = corrupt(random_image, low_band_mask)
        packed = solve_quadratic(g, low_band_mask, small_graph, cfg)
        projected = solve_quadratic(
            g,
            low_band_mask,
            small_graph,
            cfg.model_copy(update={"constraint_mode": ConstraintMode.PROJECTION}),
        )
        assert projected.final_energy == pytest.approx(packed.final_energy, rel=1e-6, abs=1e-8)
        kept = project_known(projected.restored, low_band_mask)
        assert np.max(np.abs(kept.pixels - g.pixels)) < 1e-9 * 255

    def test_empty_graph(self, random_image, low_band_mask, cfg):
        """Test no edges leaves g unchanged."""
        g = corrupt(random_image, low_band_mask)
        result = solve_quadratic(g, low_band_mask, manual_graph(16, [], []), cfg)
        assert np.array_equal(result.restored.pixels, g.pixels)
        assert result.iterations == 0

    def test_off_mask_input_is_projected(self, random_image, low_band_mask, small_graph, cfg):
        """Test an input with missing-frequency energy is projected first."""
        result = solve_quadratic(random_image, low_band_mask, small_graph, cfg)
        kept = project_known(result.restored, low_band_mask)
        expected = corrupt(random_image, low_band_mask)
        assert np.max(np.abs(kept.pixels - expected.pixels)) < 1e-9 * 255

    def test_two_identical_patches(self, rng):
        """Test two identical patches joined by one edge are recovered to zero energy."""
        n = 128
        mask = band_mask(n, BandSpec(bands=[(0, 2)], norm=BandNorm.EUCLIDEAN))
        assert mask.count == 9
        patch = rng.uniform(0, 255, size=(5, 5))
        pixels = np.zeros((n, n))
        pixels[58:63, 58:63] = patch
        pixels[58:63, 66:71] = patch
        g = corrupt(Image(pixels), mask)
        params = GraphParams(eta=10, rho=5, eps=4, m0=1, h=100.0, metric=MetricKind.ORACLE)
        graph = PatchGraph(
            n=n, params=params, src=[[60, 60]], dst=[[60, 68]], delta=[0.0], weight=[1.0]
        )
        result = solve_quadratic(g, mask, graph, SolverConfig(rho=5, cg_tol=1e-10))
        assert result.final_energy <= 1e-8 * result.energy_trace[0]
        v = result.v.pixels
        inside = np.sum(v[58:63, 58:63] ** 2) + np.sum(v[58:63, 66:71] ** 2)
        assert inside >= 0.95 * np.sum(v**2)

    def test_wrong_alpha(self, random_image, low_band_mask, small_graph):
        """Test the quadratic solver refuses alpha = 1."""
        with pytest.raises(InvalidParameterError):
            solve_quadratic(random_image, low_band_mask, small_graph, SolverConfig(alpha=1, rho=3))


class TestIrls:
    """Tests for alpha = 1 restoration."""

    def test_smoothed_energy_decreases(self, random_image, low_band_mask, small_graph):
        """Test every IRLS round lowers the smoothed energy."""
        g = corrupt(random_image, low_band_mask)
        cfg = SolverConfig(alpha=1, rho=3, cg_tol=1e-8, irls_rounds=5)
        result = solve_l1(g, low_band_mask, small_graph, cfg)
        trace = np.array(result.energy_trace)
        assert np.all(np.diff(trace) <= 1e-9 * trace[0])
        assert result.method == "irls"

    def test_smoothing_floor_reported(self, random_image, low_band_mask, small_graph):
        """Test the floor is irls_eps times the median initial difference."""
        g = corrupt(random_image, low_band_mask)
        cfg = SolverConfig(alpha=1, rho=3, irls_eps=1e-2, irls_rounds=2)
        result = solve_l1(g, low_band_mask, small_graph, cfg)
        op = NonLocalOperator(small_graph, 3)
        assert result.smoothing == pytest.approx(1e-2 * np.median(op.group_norms(g)))
        assert result.smoothing == pytest.approx(smoothing_floor(op, g, 1e-2))

    def test_constraint_preserved(self, random_image, low_band_mask, small_graph):
        """Test IRLS keeps the known coefficients."""
        g = corrupt(random_image, low_band_mask)
        result = solve(g, low_band_mask, small_graph, SolverConfig(alpha=1, rho=3, irls_rounds=3))
        kept = project_known(result.restored, low_band_mask)
        assert np.max(np.abs(kept.pixels - g.pixels)) < 1e-9 * 255

    def test_wrong_alpha(self, random_image, low_band_mask, small_graph):
        """Test solve_l1 refuses alpha = 2."""
        with pytest.raises(InvalidParameterError):
            solve_l1(random_image, low_band_mask, small_graph, SolverConfig(rho=3))


class TestSchedules:
    """Tests for restoration schedules."""

    def test_parse_hybrid(self):
        """Test 'atom,ssd*3' expands to four rounds."""
        assert parse_schedule("atom,ssd*3") == [MetricKind.ATOM] + [MetricKind.SSD] * 3

    @pytest.mark.parametrize("text", ["", "ssd,atom", "foo", "ssd*x"])
    def test_invalid_schedules(self, text):
        """Test malformed schedules are rejected."""
        with pytest.raises(InvalidScheduleError):
            parse_schedule(text)

    def test_oracle_needs_reference(self):
        """Test oracle rounds without a reference are rejected."""
        with pytest.raises(InvalidScheduleError):
            validate_schedule([MetricKind.ORACLE], has_reference=False)

    def test_iterated_ssd(self, random_image, low_band_mask):
        """Test a two-round SSD schedule reports a PSNR per round and keeps M."""
        g = corrupt(random_image, low_band_mask)
        params = GraphParams(eta=4, rho=3, eps=2, m0=3, h=200.0, metric=MetricKind.SSD)
        result = restore_iterated(
            g,
            low_band_mask,
            params,
            [MetricKind.SSD, MetricKind.SSD],
            reference=random_image,
            cfg=SolverConfig(cg_max_iter=200),
        )
        assert len(result.round_psnr) == 2
        assert result.method == "ssd+ssd"
        kept = project_known(result.restored, low_band_mask)
        assert np.max(np.abs(kept.pixels - g.pixels)) < 1e-9 * 255

    def test_atom_round_needs_atoms(self, random_image, low_band_mask):
        """Test an atom round without atoms is refused."""
        params = GraphParams(eta=4, rho=3, eps=2, m0=3, h=200.0)
        with pytest.raises(InvalidParameterError):
            restore_iterated(random_image, low_band_mask, params, [MetricKind.ATOM])
