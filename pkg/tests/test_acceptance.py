"""Acceptance gate: one test per criterion, each summarised in the terminal report.

All checks are exact (boolean) except the construction timing, which must
lie within 2x of a linear fit.
"""

import random
import time
import timeit

import pytest

from avoider_enforcer.core import Constraint, GameSpec, Player, Position, expand_to_plain
from avoider_enforcer.engine import GameStatus, apply_move, induced_game, status, to_move
from avoider_enforcer.generate import all_clauses, all_formulas, random_cnf, random_game
from avoider_enforcer.oracle import brute_force_game, brute_force_sat
from avoider_enforcer.reduction import (
    AvoiderStrategy,
    Cnf,
    box_order_restriction,
    build_reduction,
    normalize_cnf,
    strategy_outcomes,
)
from avoider_enforcer.solver import SolveOptions, Solver, solve

SEED = 20261016


def _formulas_small():
    """Every normalized formula with n <= 2 (all clause subsets)."""
    for n in (1, 2):
        yield from all_formulas(n)


def _formulas_random(count=300, seed=SEED):
    rng = random.Random(seed)
    out = []
    while len(out) < count:
        n = rng.randint(1, 4)
        norm = normalize_cnf(random_cnf(rng, n, rng.randint(0, 6)))
        out.append(norm.cnf)
    return out


@pytest.fixture(scope="module")
def theorem_sweep():
    """(cnf, satisfiable, winner with Enforcer first) for the whole sweep."""
    rows = []
    for cnf in list(_formulas_small()) + _formulas_random():
        sat = brute_force_sat(cnf) is not None
        winner = solve(build_reduction(cnf).spec, Player.ENFORCER).winner
        rows.append((cnf, sat, winner))
    return rows


def test_c1_theorem_consistency(theorem_sweep, record):
    t0 = time.perf_counter()
    bad = [cnf for cnf, sat, winner in theorem_sweep if sat != (winner is Player.AVOIDER)]
    n_sat = sum(sat for _, sat, _ in theorem_sweep)
    ok = not bad
    record(f"[{'PASS' if ok else 'FAIL'}] C1 sat <=> Avoider wins: {len(theorem_sweep)} formulas "
           f"({n_sat} sat), {len(bad)} mismatches")
    assert ok, bad[:5]
    assert len(theorem_sweep) >= 260 + 300
    assert 0 < n_sat < len(theorem_sweep)


def test_c2_first_player_neutrality(theorem_sweep, record):
    bad = []
    for cnf, _, winner in theorem_sweep:
        spec = build_reduction(cnf, Player.AVOIDER).spec
        assert spec.board_size == 4 * cnf.num_vars + 1
        if solve(spec, Player.AVOIDER).winner is not winner:
            bad.append(cnf)
    ok = not bad
    record(f"[{'PASS' if ok else 'FAIL'}] C2 dummy vertex, Avoider first: {len(theorem_sweep)} formulas, "
           f"{len(bad)} winner changes")
    assert ok, bad[:5]


def _random_game_mixed(rng, max_vertices, max_sets):
    n = rng.randint(1, max_vertices)
    return random_game(rng, n, rng.randint(0, max_sets), min(n, 5), subset=rng.random() < 0.5)


def test_c3_pruning_soundness(record):
    rng = random.Random(SEED + 3)
    games = [_random_game_mixed(rng, 13, 10) for _ in range(500)]
    bad = []
    for spec in games:
        for first in Player:
            pruned = solve(spec, first).winner
            unpruned = solve(spec, first, SolveOptions(pruning=False)).winner
            oracle = brute_force_game(spec, first)
            if not pruned is unpruned is oracle:
                bad.append((spec, first))
    subset_games = sum(not g.is_plain for g in games)
    ok = not bad
    record(f"[{'PASS' if ok else 'FAIL'}] C3 pruned = unpruned = brute force: {len(games)} games x 2 first "
           f"players ({subset_games} subset games), {len(bad)} disagreements")
    assert ok, bad[:3]
    assert 0 < subset_games < len(games)


def test_c4_induced_game_consistency(record):
    rng = random.Random(SEED + 4)
    bad = []
    midgame = 0
    for _ in range(200):
        spec = _random_game_mixed(rng, 12, 8)
        first = rng.choice(list(Player))
        pos = Position()
        for _ in range(rng.randint(0, spec.board_size - 1)):
            if status(spec, pos) is not GameStatus.ONGOING:
                break
            free = [v for v in range(spec.board_size) if not pos.claimed_mask >> v & 1]
            pos = apply_move(spec, pos, rng.choice(free), to_move(first, pos))
        direct = Solver(spec, first).avoider_wins(pos)
        ind = induced_game(spec, pos)
        if ind.already_lost:
            via_induced = False
        else:
            via_induced = solve(ind.spec, to_move(first, pos)).winner is Player.AVOIDER
        midgame += pos.num_claimed > 0
        if direct != via_induced:
            bad.append((spec, first, pos))
    ok = not bad
    record(f"[{'PASS' if ok else 'FAIL'}] C4 position vs induced game: 200 trials ({midgame} non-empty "
           f"prefixes), {len(bad)} disagreements")
    assert ok, bad[:3]


def test_c5_expansion_equivalence(record):
    rng = random.Random(SEED + 5)
    bad = []
    for _ in range(200):
        n = rng.randint(1, 12)
        spec = random_game(rng, n, rng.randint(0, 8), min(n, 6), subset=True)
        plain = expand_to_plain(spec)
        for first in Player:
            if solve(spec, first).winner is not solve(plain, first).winner:
                bad.append((spec, first))
    ok = not bad
    record(f"[{'PASS' if ok else 'FAIL'}] C5 subset game = expanded plain game: 200 games x 2 first players, "
           f"{len(bad)} disagreements")
    assert ok, bad[:3]


def _clause_mask(vm, clause):
    m = 0
    for var, positive in clause:
        m |= 1 << vm.s(var) | 1 << vm.literal_vertex(var, not positive)
    return m


def test_c6_strategy_certificate(record):
    t0 = time.perf_counter()
    checked_lines = 0
    # n <= 2: every satisfiable formula, checked on its own game.
    formulas = 0
    for cnf in _formulas_small():
        sol = brute_force_sat(cnf)
        if sol is None:
            continue
        formulas += 1
        for first in Player:
            red = build_reduction(cnf, first)
            finals, lines = strategy_outcomes(AvoiderStrategy(sol, red.varmap), red.spec, first)
            checked_lines += lines
            for a in finals:
                assert not any((a & c.mask).bit_count() >= c.threshold for c in red.spec.constraints), cnf
    # n = 3: the strategy depends only on the assignment, so one enumeration
    # per assignment certifies every formula that assignment satisfies.
    classes = 0
    for bits in range(8):
        sol = tuple(bool(bits >> i & 1) for i in range(3))
        sat_clauses = [c for c in all_clauses(3) if any(sol[v] == p for v, p in c)]
        for first in Player:
            red = build_reduction(Cnf(3, tuple(sat_clauses)), first)
            vm = red.varmap
            finals, lines = strategy_outcomes(AvoiderStrategy(sol, vm), red.spec, first)
            checked_lines += lines
            masks = [_clause_mask(vm, c) for c in sat_clauses]
            triples = [c.mask for c in red.spec.constraints[:12]]
            for a in finals:
                assert not any(a & m == m for m in triples)
                assert not any(a & m == m for m in masks)
            classes += 1
    elapsed = time.perf_counter() - t0
    record(f"[PASS] C6 strategy certificate: {formulas} formulas (n<=2) + {classes} assignment classes (n=3, "
           f"all {len(all_clauses(3))} satisfied clauses), {checked_lines} Enforcer lines, {elapsed:.1f}s")
    assert elapsed < 60 * (classes + 1)


def _linear_fit(xs, ys):
    # relative least squares: minimize sum(((a + b x) / y - 1)^2)
    s00 = sum(1 / y**2 for y in ys)
    s01 = sum(x / y**2 for x, y in zip(xs, ys))
    s11 = sum(x * x / y**2 for x, y in zip(xs, ys))
    r0 = sum(1 / y for y in ys)
    r1 = sum(x / y for x, y in zip(xs, ys))
    det = s00 * s11 - s01 * s01
    a = (r0 * s11 - r1 * s01) / det
    b = (s00 * r1 - s01 * r0) / det
    return a, b


def test_c7_construction_metrics(theorem_sweep, record):
    for cnf, _, _ in theorem_sweep:
        m = len(cnf.clauses)
        for first in Player:
            spec = build_reduction(cnf, first).spec
            assert spec.board_size == 4 * cnf.num_vars + (first is Player.AVOIDER)
            assert len(spec.constraints) == 4 * cnf.num_vars + m
            assert max((len(c.members) for c in spec.constraints), default=0) <= 6
    rng = random.Random(SEED + 7)
    sizes = [10, 100, 1000, 10000]
    times = []
    for n in sizes:
        cnf = normalize_cnf(random_cnf(rng, n, 4 * n)).cnf
        spec = build_reduction(cnf).spec
        assert spec.board_size == 4 * n and len(spec.constraints) == 4 * n + len(cnf.clauses)
        assert max(len(c.members) for c in spec.constraints) == 6
        reps = max(3, 20000 // n)
        # timeit disables the cyclic GC while timing
        best = min(timeit.repeat(lambda: build_reduction(cnf), number=reps, repeat=5))
        times.append(best / reps)
    a, b = _linear_fit(sizes, times)
    ratios = [t / (a + b * n) for n, t in zip(sizes, times)]
    ok = all(0.5 <= r <= 2.0 for r in ratios)
    record(f"[{'PASS' if ok else 'FAIL'}] C7 sizes 4n(+1) / 4n+m / max 6 on {len(theorem_sweep)} formulas; build "
           f"time / linear fit at n={sizes}: {', '.join(f'{r:.2f}' for r in ratios)}")
    assert ok, (times, ratios)


def test_c8_order_restriction_neutrality(record):
    rng = random.Random(SEED + 8)
    formulas = list(_formulas_small())
    formulas += [normalize_cnf(random_cnf(rng, 3, rng.randint(0, 8))).cnf for _ in range(150)]
    bad = []
    for k, cnf in enumerate(formulas):
        red = build_reduction(cnf)
        order = box_order_restriction(red.varmap)
        free = solve(red.spec, Player.ENFORCER).winner
        restricted = solve(red.spec, Player.ENFORCER, SolveOptions(order_restriction=order)).winner
        if restricted is not free:
            bad.append(cnf)
        if k % 5 == 0:
            plain = solve(red.spec, Player.ENFORCER, SolveOptions(pruning=False, order_restriction=order))
            if plain.winner is not free:
                bad.append(cnf)
    ok = not bad
    record(f"[{'PASS' if ok else 'FAIL'}] C8 box-order restriction keeps the winner: {len(formulas)} formulas "
           f"(n<=3), {len(bad)} changes")
    assert ok, bad[:3]


def test_c9_box_response_necessity(record):
    checked = 0
    formulas = 0
    for cnf in _formulas_small():
        if cnf.num_vars < 2 or brute_force_sat(cnf) is None:
            continue
        formulas += 1
        red = build_reduction(cnf)
        vm = red.varmap
        solver = Solver(red.spec, Player.ENFORCER)
        for box in range(2):
            for opening in vm.box(box):
                pos = Position.of((), {opening})
                in_box_wins = False
                for reply in range(red.spec.board_size):
                    if reply == opening:
                        continue
                    wins = solver.avoider_wins(apply_move(red.spec, pos, reply, Player.AVOIDER))
                    if vm.box_of(reply) == box:
                        in_box_wins |= wins
                    else:
                        checked += 1
                        assert not wins, (cnf, opening, reply)
                assert in_box_wins, (cnf, opening)
    record(f"[PASS] C9 off-box replies lose: {formulas} satisfiable formulas (n=2), {checked} replies checked")
    assert formulas > 0
