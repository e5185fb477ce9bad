"""
Mask-adapted atoms: the smallest eigenpairs of the moment form on M.

phi_1 minimizes the p-moment among unit images with spectrum in M, each
following atom does the same orthogonally to its predecessors, so the
atoms are the eigenvectors of the form for its n0 smallest eigenvalues.
"""

import logging
import time
import warnings
from dataclasses import dataclass
from typing import Optional

import numpy as np
from scipy import linalg
from scipy.sparse.linalg import LinearOperator, eigsh, lobpcg

from src.atoms.moments import MomentWeight, apply_form, assemble_form, moment_weights
from src.config import get_settings
from src.exceptions import InvalidParameterError, NoConvergenceError
from src.spectral.basis import MaskBasis, require_dof
from src.spectral.core import FreqMask, Image

logger = logging.getLogger(__name__)
settings = get_settings()

SIGN_EPS = 1e-12
GAP_TOL = 1e-6


@dataclass(frozen=True)
class AtomSet:
    """Orthonormal atoms stored origin-at-(0, 0), moments ascending."""

    atoms: np.ndarray
    moments: np.ndarray
    p: float
    mask_id: str

    def __post_init__(self):
        for name in ("atoms", "moments"):
            array = np.array(getattr(self, name), dtype=np.float64, copy=True)
            array.setflags(write=False)
            object.__setattr__(self, name, array)
        if self.atoms.ndim != 3 or self.atoms.shape[0] != self.moments.shape[0]:
            raise InvalidParameterError("atoms and moments disagree in count")

    @property
    def n0(self) -> int:
        return self.atoms.shape[0]

    @property
    def n(self) -> int:
        return self.atoms.shape[1]

    def atom(self, index: int) -> Image:
        return Image(self.atoms[index])

    def gram(self) -> np.ndarray:
        flat = self.atoms.reshape(self.n0, -1)
        return flat @ flat.T


def _operator(basis: MaskBasis, w: MomentWeight) -> LinearOperator:
    def matmat(block: np.ndarray) -> np.ndarray:
        block = np.asarray(block).reshape(basis.dof, -1)
        return np.column_stack([apply_form(col, basis, w) for col in block.T])

    return LinearOperator(
        (basis.dof, basis.dof),
        matvec=lambda v: apply_form(np.ravel(v), basis, w),
        matmat=matmat,
        rmatvec=lambda v: apply_form(np.ravel(v), basis, w),
        dtype=np.float64,
    )


def _rayleigh_ritz(op: LinearOperator, vectors: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    q, _ = linalg.qr(vectors, mode="economic")
    projected = q.T @ (op @ q)
    values, rotation = linalg.eigh(0.5 * (projected + projected.T))
    return values, q @ rotation


def _residuals(op: LinearOperator, values: np.ndarray, vectors: np.ndarray) -> np.ndarray:
    return np.linalg.norm(op @ vectors - vectors * values, axis=0)


def _lobpcg_deflated(
    op: LinearOperator,
    count: int,
    tol: float,
    max_iter: int,
    rng: np.random.Generator,
) -> np.ndarray:
    """Block LOBPCG, each block hard-deflated against the vectors already found."""
    dof = op.shape[0]
    found = np.empty((dof, 0))
    while found.shape[1] < count:
        size = min(settings.atoms_block_size, count - found.shape[1])
        guard = min(2, dof - found.shape[1] - size)
        start = rng.standard_normal((dof, size + guard))
        with warnings.catch_warnings():
            warnings.simplefilter("ignore", UserWarning)
            values, vectors = lobpcg(
                op,
                start,
                Y=found if found.shape[1] else None,
                tol=tol,
                maxiter=max_iter,
                largest=False,
            )
        order = np.argsort(values)[:size]
        block = vectors[:, order]
        worst = float(_residuals(op, values[order], block).max())
        if worst > tol:
            raise NoConvergenceError(
                f"LOBPCG block stalled with residual {worst:.3e} > {tol:.3e}",
                iterations=max_iter,
                residual=worst,
            )
        found = np.hstack([found, block])
        logger.debug(f"LOBPCG block converged: {found.shape[1]}/{count} vectors")
    return found


def _lanczos(
    op: LinearOperator, count: int, tol: float, max_iter: int, rng: np.random.Generator
) -> np.ndarray:
    _, vectors = eigsh(
        op,
        k=count,
        which="SA",
        tol=tol,
        maxiter=max_iter * count,
        v0=rng.standard_normal(op.shape[0]),
    )
    return vectors


def _fix_sign(atom: np.ndarray) -> float:
    """+1 or -1 making the origin value (or first significant pixel) positive."""
    origin = atom[0, 0]
    if abs(origin) >= SIGN_EPS:
        return 1.0 if origin > 0 else -1.0
    flat = atom.ravel()
    significant = np.flatnonzero(np.abs(flat) > SIGN_EPS)
    if significant.size == 0:
        return 1.0
    return 1.0 if flat[significant[0]] > 0 else -1.0


def _iterative(
    op: LinearOperator, count: int, tol: float, max_iter: int, rng: np.random.Generator
) -> tuple[np.ndarray, str]:
    if settings.atoms_solver == "lanczos":
        return _lanczos(op, count, tol, max_iter, rng), "lanczos"
    try:
        return _lobpcg_deflated(op, count, tol, max_iter, rng), "lobpcg"
    except (NoConvergenceError, NotImplementedError) as e:
        logger.warning(f"LOBPCG failed ({e}); retrying with Lanczos")
        return _lanczos(op, count, tol, max_iter, rng), "lanczos"


def split_clusters(values: np.ndarray, n0: int, gap: float) -> bool:
    """True if eigenvalues n0 - 1 and n0 (0-based) are closer than gap."""
    return len(values) > n0 and values[n0] - values[n0 - 1] <= gap


def compute_atoms(
    mask: FreqMask,
    p: float,
    n0: int,
    tol: Optional[float] = None,
    max_iter: Optional[int] = None,
    seed: int = 0,
    extend_to_gap: bool = False,
) -> AtomSet:
    """
    Compute the n0 most localized atoms with spectrum in the mask.

    Args:
        mask: Known-frequency mask M
        p: Moment exponent (> 1)
        n0: Number of atoms
        tol: Relative eigen-residual tolerance (scaled by the form norm)
        max_iter: Iteration cap of the iterative eigensolver
        seed: Seed of the random starting vectors
        extend_to_gap: Grow n0 until it no longer splits a near-degenerate
            eigenvalue cluster (at most atoms_gap_search extra atoms)

    Returns:
        AtomSet with ascending moments

    Raises:
        InvalidParameterError: If n0 exceeds the dimension of M
        NoConvergenceError: If the eigensolver does not reach tol
    """
    tol = settings.atoms_tol if tol is None else tol
    max_iter = settings.atoms_max_iter if max_iter is None else max_iter
    if n0 < 1:
        raise InvalidParameterError(f"atom count must be positive, got {n0}")
    basis = MaskBasis.for_mask(mask)
    require_dof(basis, n0)
    w = moment_weights(mask.n, p)
    op = _operator(basis, w)
    abs_tol = tol * w.norm_estimate
    gap = GAP_TOL * w.norm_estimate
    extra = settings.atoms_gap_search if extend_to_gap else 0
    target = min(n0 + 1 + extra, basis.dof)
    rng = np.random.default_rng(seed)
    start = time.time()

    if basis.dof <= settings.atoms_dense_limit or target >= basis.dof:
        values, vectors = linalg.eigh(assemble_form(basis, w))
        values, vectors = values[:target], vectors[:, :target]
        method = "dense"
    else:
        vectors, method = _iterative(op, target, abs_tol, max_iter, rng)
        values, vectors = _rayleigh_ritz(op, vectors)

    requested = n0
    if extend_to_gap:
        while n0 < target - 1 and split_clusters(values, n0, gap):
            n0 += 1
        if n0 > requested:
            logger.info(f"Grew n0 from {requested} to {n0} to keep an eigenvalue cluster whole")

    if method != "dense":
        worst = float(_residuals(op, values[:n0], vectors[:, :n0]).max())
        if worst > abs_tol:
            raise NoConvergenceError(
                f"atom eigenpairs did not converge (residual {worst:.3e} > {abs_tol:.3e})",
                iterations=max_iter,
                residual=worst,
            )

    if split_clusters(values, n0, gap):
        logger.warning(
            f"n0={n0} splits a near-degenerate eigenvalue cluster "
            f"({values[n0 - 1]:.6e} vs {values[n0]:.6e}); atoms span an arbitrary subspace"
        )

    atoms = np.empty((n0, mask.n, mask.n))
    for i in range(n0):
        atom = basis.to_pixels(vectors[:, i])
        atoms[i] = _fix_sign(atom) * atom
    logger.info(
        f"Computed {n0} atoms (p={p}, dof={basis.dof}, {method}) in {time.time() - start:.2f}s; "
        f"moments {values[0]:.3e}..{values[n0 - 1]:.3e}"
    )
    return AtomSet(atoms=atoms, moments=values[:n0], p=float(p), mask_id=mask.mask_id)
