"""
Mask-adapted atom basis: moment form, eigensolver, storage and reports.
"""

from src.atoms.eigensolver import AtomSet, compute_atoms
from src.atoms.moments import MomentWeight, apply_form, assemble_form, moment_weights
from src.atoms.report import AtomView, atom_report
from src.atoms.store import AtomStore, get_atom_store, load_atoms, save_atoms

__all__ = [
    "AtomSet",
    "AtomStore",
    "AtomView",
    "MomentWeight",
    "apply_form",
    "assemble_form",
    "atom_report",
    "compute_atoms",
    "get_atom_store",
    "load_atoms",
    "moment_weights",
    "save_atoms",
]
