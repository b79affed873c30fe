"""Seeded random games and formulas for property tests and benchmarks."""

from __future__ import annotations

import random
from itertools import combinations, product

from .core import Constraint, GameSpec, Player
from .reduction import Cnf


def random_game(
    rng: random.Random,
    vertices: int,
    sets: int,
    max_size: int,
    subset: bool = False,
    first: Player = Player.ENFORCER,
) -> GameSpec:
    if vertices < 1 or sets < 0 or not 1 <= max_size <= vertices:
        raise ValueError(
            f"infeasible parameters: vertices={vertices} sets={sets} max_size={max_size}"
        )
    out = []
    for _ in range(sets):
        size = rng.randint(1, max_size)
        members = sorted(rng.sample(range(vertices), size))
        threshold = rng.randint(1, size) if subset else size
        out.append(Constraint(members, threshold))
    return GameSpec(vertices, tuple(out), first)


def random_cnf(rng: random.Random, num_vars: int, num_clauses: int, max_width: int = 3) -> Cnf:
    """Clauses of 1..max_width distinct variables with random polarities."""
    clauses = []
    for _ in range(num_clauses):
        width = rng.randint(1, min(max_width, num_vars))
        vs = sorted(rng.sample(range(num_vars), width))
        clauses.append(tuple((v, rng.random() < 0.5) for v in vs))
    return Cnf(num_vars, tuple(clauses))


def all_clauses(num_vars: int) -> list[tuple[tuple[int, bool], ...]]:
    """Every non-tautological clause over 1..3 distinct variables, canonical order."""
    out = []
    for width in range(1, min(3, num_vars) + 1):
        for vs in combinations(range(num_vars), width):
            for signs in product((True, False), repeat=width):
                out.append(tuple(zip(vs, signs)))
    return out


def all_formulas(num_vars: int):
    """Every subset of ``all_clauses(num_vars)`` as a Cnf (2**len(clauses) formulas)."""
    clauses = all_clauses(num_vars)
    for bits in range(1 << len(clauses)):
        yield Cnf(num_vars, tuple(c for i, c in enumerate(clauses) if bits >> i & 1))
