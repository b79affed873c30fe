import random

import pytest
from hypothesis import strategies as st

from avoider_enforcer.core import Constraint, GameSpec, Player
from avoider_enforcer.reduction import Cnf

_criteria: list[str] = []


@pytest.fixture
def record():
    """Collect one summary line per acceptance criterion."""
    return _criteria.append


def pytest_terminal_summary(terminalreporter):
    if _criteria:
        terminalreporter.section("acceptance criteria")
        for line in _criteria:
            terminalreporter.write_line(line)


@st.composite
def game_specs(draw, max_vertices=8, max_sets=6, subset=True):
    n = draw(st.integers(1, max_vertices))
    sets = []
    for _ in range(draw(st.integers(0, max_sets))):
        members = draw(st.sets(st.integers(0, n - 1), min_size=1, max_size=min(n, 5)))
        t = draw(st.integers(1, len(members))) if subset else len(members)
        sets.append(Constraint(members, t))
    first = draw(st.sampled_from(list(Player)))
    return GameSpec(n, tuple(sets), first)


@st.composite
def cnfs(draw, max_vars=4, max_clauses=5):
    n = draw(st.integers(1, max_vars))
    clauses = []
    for _ in range(draw(st.integers(0, max_clauses))):
        vs = draw(st.lists(st.integers(0, n - 1), min_size=1, max_size=3))
        clauses.append(tuple((v, draw(st.booleans())) for v in vs))
    return Cnf(n, tuple(clauses))


def single_box() -> GameSpec:
    return GameSpec(4, tuple(Constraint(t) for t in [(0, 1, 2), (0, 1, 3), (0, 2, 3), (1, 2, 3)]))


@pytest.fixture
def rng():
    return random.Random(20261016)
