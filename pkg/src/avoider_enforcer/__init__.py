"""Exact solver and 3SAT reduction lab for Avoider-Enforcer games."""

from .core import Constraint, GameSpec, Player, Position
from .engine import GameStatus
from .reduction import Cnf
from .solver import SolveOptions, SolveResult, Solver, solve

__all__ = [
    "Cnf",
    "Constraint",
    "GameSpec",
    "GameStatus",
    "Player",
    "Position",
    "SolveOptions",
    "SolveResult",
    "Solver",
    "solve",
]
