"""
Constrained total-variation baseline.
"""

from src.tv.operators import divergence, gradient, tv_value
from src.tv.solver import prox_objective, solve_tv, tv_prox

__all__ = ["divergence", "gradient", "prox_objective", "solve_tv", "tv_prox", "tv_value"]
