"""
Quadratic non-local restoration (alpha = 2).

Minimizes E(g + v) over v carried by the missing frequencies with CG,
either in packed real coordinates of the missing subspace or in pixel
space with a projection after every operator application.
"""

import logging
import time
from typing import Callable, Optional

import numpy as np

from src.exceptions import InvalidParameterError, SizeMismatchError
from src.models.params import ConstraintMode, SolverConfig
from src.similarity.graph import PatchGraph
from src.solver.cg import conjugate_gradient
from src.solver.operator import NonLocalOperator
from src.solver.result import RestoreResult
from src.spectral.basis import MaskBasis
from src.spectral.core import FreqMask, Image, project_known_array, project_missing

logger = logging.getLogger(__name__)

OFF_MASK_RTOL = 1e-9


def check_sizes(g: Image, mask: FreqMask, graph: Optional[PatchGraph] = None) -> None:
    if g.n != mask.n:
        raise SizeMismatchError(f"image side {g.n} does not match mask side {mask.n}")
    if graph is not None and graph.n != g.n:
        raise SizeMismatchError(f"graph side {graph.n} does not match image side {g.n}")


def ensure_known(g: Image, mask: FreqMask) -> Image:
    """Return g projected onto the known subspace, warning if that changed it."""
    stray = project_missing(g, mask)
    if stray.norm() > OFF_MASK_RTOL * max(g.norm(), 1.0):
        logger.warning(
            f"Input carries energy {stray.norm():.3e} on missing frequencies; projecting"
        )
        return g - stray
    return g


def _coordinates(
    mask: FreqMask, mode: ConstraintMode
) -> tuple[Callable[[np.ndarray], np.ndarray], Callable[[np.ndarray], np.ndarray]]:
    """(pixels -> coordinates, coordinates -> pixels) for the missing subspace."""
    n = mask.n
    if mode == ConstraintMode.PACKED:
        basis = MaskBasis.for_complement(mask)
        return basis.from_pixels, basis.to_pixels

    def restrict(pixels: np.ndarray) -> np.ndarray:
        pixels = np.asarray(pixels).reshape(n, n)
        return (pixels - project_known_array(pixels, mask.known)).ravel()

    def expand(vec: np.ndarray) -> np.ndarray:
        return restrict(vec).reshape(n, n)

    return restrict, expand


def minimize_quadratic(
    g: Image,
    mask: FreqMask,
    op: NonLocalOperator,
    cfg: SolverConfig,
    v0: Optional[Image] = None,
) -> RestoreResult:
    """
    CG on the operator's quadratic energy; g must already lie in M.

    Returns the lowest-energy iterate. Non-convergence is flagged, not raised.
    """
    started = time.perf_counter()
    n = g.n
    if op.graph.edge_count == 0:
        zero = Image.zeros(n)
        return RestoreResult(
            restored=g,
            v=zero,
            energy_trace=(0.0,),
            iterations=0,
            wall_time=time.perf_counter() - started,
            method="quadratic",
        )

    to_coords, to_pixels = _coordinates(mask, cfg.constraint_mode)
    base = g.pixels

    def apply(x: np.ndarray) -> np.ndarray:
        return to_coords(op.hessian_apply(to_pixels(x)))

    b = -to_coords(op.gradient(base))
    x0 = None if v0 is None else to_coords(v0.pixels)
    start = np.zeros_like(b) if x0 is None else x0

    trace = [op.energy(base + to_pixels(start))]
    best = {"x": start.copy(), "energy": trace[0]}

    def record(x: np.ndarray) -> None:
        value = op.energy(base + to_pixels(x))
        trace.append(value)
        if value <= best["energy"]:
            best["x"] = x.copy()
            best["energy"] = value

    outcome = conjugate_gradient(
        apply, b, x0=x0, tol=cfg.cg_tol, max_iter=cfg.cg_max_iter, on_iterate=record
    )
    if not outcome.converged:
        logger.warning(
            f"CG stopped after {outcome.iterations} iterations with residual "
            f"{outcome.residual:.3e}; returning best iterate"
        )

    v_pixels = to_pixels(best["x"])
    if cfg.constraint_mode == ConstraintMode.PROJECTION:
        v_pixels = v_pixels - project_known_array(v_pixels, mask.known)
    v = Image(v_pixels)
    elapsed = time.perf_counter() - started
    logger.info(
        f"Quadratic solve: {outcome.iterations} CG iterations, energy "
        f"{trace[0]:.4e} -> {best['energy']:.4e} in {elapsed:.2f}s"
    )
    return RestoreResult(
        restored=g + v,
        v=v,
        energy_trace=tuple(trace),
        iterations=outcome.iterations,
        wall_time=elapsed,
        converged=outcome.converged,
        method="quadratic",
    )


def solve_quadratic(
    g: Image,
    mask: FreqMask,
    graph: PatchGraph,
    cfg: Optional[SolverConfig] = None,
    v0: Optional[Image] = None,
) -> RestoreResult:
    """
    Minimize the quadratic non-local energy over the missing frequencies.

    Args:
        g: Corrupted image (projected onto M with a warning if needed)
        mask: Known frequencies
        graph: Patch graph with edge weights
        cfg: Solver configuration with alpha = 2
        v0: Optional warm start, projected onto the missing subspace

    Returns:
        RestoreResult whose known coefficients equal those of g
    """
    cfg = cfg or SolverConfig()
    if cfg.alpha != 2:
        raise InvalidParameterError("solve_quadratic requires alpha = 2; use solve_l1")
    check_sizes(g, mask, graph)
    g = ensure_known(g, mask)
    op = NonLocalOperator(graph, cfg.rho, cfg.window)
    return minimize_quadratic(g, mask, op, cfg, v0=v0)
