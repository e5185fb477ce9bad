"""
Conjugate gradient for symmetric positive semidefinite operators.
"""

import logging
from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np

logger = logging.getLogger(__name__)


@dataclass
class CgOutcome:
    """Final CG state."""

    x: np.ndarray
    iterations: int
    residual: float
    converged: bool


def conjugate_gradient(
    apply: Callable[[np.ndarray], np.ndarray],
    b: np.ndarray,
    x0: Optional[np.ndarray] = None,
    tol: float = 1e-6,
    max_iter: int = 500,
    on_iterate: Optional[Callable[[np.ndarray], None]] = None,
) -> CgOutcome:
    """
    Solve A x = b.

    Args:
        apply: x -> A x
        b: Right-hand side
        x0: Initial guess (zeros when omitted)
        tol: Stop once ||b - A x|| <= tol * ||b||
        max_iter: Iteration cap
        on_iterate: Called with every new iterate

    Returns:
        CgOutcome; ``converged`` is False when the cap was hit
    """
    x = np.zeros_like(b) if x0 is None else np.array(x0, dtype=np.float64, copy=True)
    r = b - apply(x) if x0 is not None else b.copy()
    d = r.copy()
    rr = float(r @ r)
    target = tol * float(np.linalg.norm(b))

    iterations = 0
    while np.sqrt(rr) > target and iterations < max_iter:
        Ad = apply(d)
        curvature = float(d @ Ad)
        if curvature <= 0.0:
            # d lies in the null space; nothing left to minimize along it
            break
        step = rr / curvature
        x += step * d
        r -= step * Ad
        rr_next = float(r @ r)
        d = r + (rr_next / rr) * d
        rr = rr_next
        iterations += 1
        if on_iterate is not None:
            on_iterate(x)

    residual = float(np.sqrt(rr))
    return CgOutcome(x=x, iterations=iterations, residual=residual, converged=residual <= target)
