"""
Per-atom display images: the atom and its log-magnitude spectrum.
"""

from dataclasses import dataclass

import numpy as np
from scipy import fft

from src.atoms.eigensolver import AtomSet

LOG_FLOOR = 1e-12


@dataclass(frozen=True)
class AtomView:
    """Display pair for one atom, both DC/origin-centered."""

    index: int
    moment: float
    atom: np.ndarray
    log_spectrum: np.ndarray


def atom_report(atom_set: AtomSet, floor: float = LOG_FLOOR) -> list[AtomView]:
    """phi_n and log(max(|F(phi_n)|, floor)) for every atom."""
    views = []
    for i in range(atom_set.n0):
        magnitude = np.abs(fft.fft2(atom_set.atoms[i], norm="ortho"))
        views.append(
            AtomView(
                index=i,
                moment=float(atom_set.moments[i]),
                atom=fft.fftshift(atom_set.atoms[i]),
                log_spectrum=fft.fftshift(np.log(np.maximum(magnitude, floor))),
            )
        )
    return views
