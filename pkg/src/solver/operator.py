"""
Patch-difference operator behind the non-local energy.

Row (e, t) of D takes u(x_k + t) - u(x_l + t) for edge e = (k, l) and
patch offset t; each row carries the coefficient c = w_e psi(t)^2. The
quadratic energy is sum c (Du)^2, its gradient 2 D^T C D u.
"""

import logging
from typing import Optional

import numpy as np
from scipy import sparse
from scipy.signal import windows

from src.exceptions import SizeMismatchError
from src.models.params import PatchWindow, SolverConfig
from src.similarity.distances import patch_offsets
from src.similarity.graph import PatchGraph
from src.spectral.core import Image

logger = logging.getLogger(__name__)


def window_weights(rho: int, window: PatchWindow) -> np.ndarray:
    """psi^2 over the rho x rho offsets, in patch_offsets order."""
    if window == PatchWindow.HANN:
        # interior of a (rho + 2)-point Hann window: strictly positive, peak 1
        profile = windows.hann(rho + 2, sym=True)[1:-1]
    else:
        profile = np.ones(rho)
    psi = np.outer(profile, profile).ravel()
    return psi**2


class NonLocalOperator:
    """
    Sparse difference operator for one patch graph.

    Args:
        graph: Patch graph supplying edges and weights
        rho: Width of the window psi
        window: Window shape
        edge_scale: Optional per-edge multiplier (IRLS reweighting)
    """

    def __init__(
        self,
        graph: PatchGraph,
        rho: int,
        window: PatchWindow = PatchWindow.INDICATOR,
        edge_scale: Optional[np.ndarray] = None,
    ):
        self.graph = graph
        self.n = graph.n
        self.rho = rho
        self.window = window
        self.psi_sq = window_weights(rho, window)
        self._diff = self._assemble(graph, rho)
        scale = np.ones(graph.edge_count) if edge_scale is None else np.asarray(edge_scale)
        if scale.shape != (graph.edge_count,):
            raise SizeMismatchError(
                f"edge scale has shape {scale.shape}, expected ({graph.edge_count},)"
            )
        self.edge_scale = scale
        self.coeffs = (
            (graph.weight * scale)[:, None] * self.psi_sq[None, :]
        ).ravel()

    @staticmethod
    def _assemble(graph: PatchGraph, rho: int) -> sparse.csr_matrix:
        n = graph.n
        offsets = patch_offsets(rho)
        count = graph.edge_count * len(offsets)
        plus = (graph.src[:, None, :] + offsets[None, :, :]) % n
        minus = (graph.dst[:, None, :] + offsets[None, :, :]) % n
        cols = np.concatenate(
            [(plus[..., 0] * n + plus[..., 1]).ravel(), (minus[..., 0] * n + minus[..., 1]).ravel()]
        )
        rows = np.concatenate([np.arange(count), np.arange(count)])
        values = np.concatenate([np.ones(count), -np.ones(count)])
        return sparse.csr_matrix((values, (rows, cols)), shape=(count, n * n))

    def with_edge_scale(self, edge_scale: np.ndarray) -> "NonLocalOperator":
        return NonLocalOperator(self.graph, self.rho, self.window, edge_scale)

    def _flat(self, u: np.ndarray | Image) -> np.ndarray:
        pixels = u.pixels if isinstance(u, Image) else np.asarray(u, dtype=np.float64)
        if pixels.shape != (self.n, self.n):
            raise SizeMismatchError(f"expected a {self.n}x{self.n} grid, got {pixels.shape}")
        return pixels.ravel()

    def differences(self, u: np.ndarray | Image) -> np.ndarray:
        """(edges, rho^2) patch differences u(x_k + t) - u(x_l + t)."""
        return (self._diff @ self._flat(u)).reshape(self.graph.edge_count, self.psi_sq.size)

    def energy(self, u: np.ndarray | Image, alpha: int = 2) -> float:
        """sum_e w_e sum_t psi(t)^2 |u(x_k + t) - u(x_l + t)|^alpha."""
        diff = self._diff @ self._flat(u)
        return float(np.sum(self.coeffs * np.abs(diff) ** alpha))

    def gradient(self, u: np.ndarray | Image) -> np.ndarray:
        """Gradient of the quadratic energy, as an n x n array."""
        diff = self._diff @ self._flat(u)
        return (2.0 * (self._diff.T @ (self.coeffs * diff))).reshape(self.n, self.n)

    def hessian_apply(self, u: np.ndarray | Image) -> np.ndarray:
        """H u with H = 2 D^T C D; symmetric positive semidefinite."""
        return self.gradient(u)

    def group_norms(self, u: np.ndarray | Image) -> np.ndarray:
        """Per-edge windowed difference norms ||psi (u_k - u_l)||_2."""
        diff = self.differences(u)
        return np.sqrt(np.sum(self.psi_sq[None, :] * diff**2, axis=1))

    def smoothed_group_energy(self, u: np.ndarray | Image, floor: float) -> float:
        """sum_e w_e H(r_e) with the Huber function of width `floor`."""
        r = self.group_norms(u)
        huber = np.where(r >= floor, r, r**2 / (2.0 * floor) + floor / 2.0)
        return float(np.sum(self.graph.weight * huber))


def energy(u: Image, graph: PatchGraph, cfg: Optional[SolverConfig] = None) -> float:
    """Non-local energy of u under the graph, pointwise form for alpha = 1."""
    cfg = cfg or SolverConfig()
    if u.n != graph.n:
        raise SizeMismatchError(f"image side {u.n} does not match graph side {graph.n}")
    return NonLocalOperator(graph, cfg.rho, cfg.window).energy(u, cfg.alpha)
