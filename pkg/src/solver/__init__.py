"""
Non-local energy minimization: operator, CG, IRLS and restoration schedules.
"""

from src.solver.cg import CgOutcome, conjugate_gradient
from src.solver.irls import solve_l1
from src.solver.operator import NonLocalOperator, energy, window_weights
from src.solver.quadratic import solve_quadratic
from src.solver.result import RestoreResult
from src.solver.schedule import parse_schedule, restore_iterated, solve, validate_schedule

__all__ = [
    "CgOutcome",
    "NonLocalOperator",
    "RestoreResult",
    "conjugate_gradient",
    "energy",
    "parse_schedule",
    "restore_iterated",
    "solve",
    "solve_l1",
    "solve_quadratic",
    "validate_schedule",
    "window_weights",
]
