"""3SAT to Avoider-Enforcer reduction, its Avoider strategy and verification.

Each variable i gets a box of four vertices laid out as

    a_i = 4i, s_i = 4i + 1, x_i = 4i + 2, ~x_i = 4i + 3

with every triple inside the box a losing set.  A clause C over variables
h gets the losing set {s_h} + {vertex of the negated literal of h}.  When
Avoider moves first, one constraint-free vertex is appended at the end.
"""

from __future__ import annotations

import time
from dataclasses import dataclass
from itertools import combinations
from typing import Iterable, Sequence

from .core import Constraint, GameError, GameSpec, Player, Position
from .oracle import brute_force_sat
from .solver import NodeLimitExceeded, SolveOptions, Solver

Literal = tuple[int, bool]  # (variable index, positive?)
Clause = tuple[Literal, ...]
Assignment = tuple[bool, ...]

A, S, X, XBAR = range(4)


@dataclass(frozen=True)
class Cnf:
    num_vars: int
    clauses: tuple[Clause, ...] = ()

    def __post_init__(self):
        object.__setattr__(
            self, "clauses", tuple(tuple((int(v), bool(p)) for v, p in c) for c in self.clauses)
        )
        if self.num_vars < 0:
            raise ValueError("num_vars must be non-negative")
        for c in self.clauses:
            for v, _ in c:
                if not 0 <= v < self.num_vars:
                    raise ValueError(f"variable {v} out of range for {self.num_vars} variables")

    @classmethod
    def from_ints(cls, num_vars: int, clauses: Iterable[Iterable[int]]) -> Cnf:
        """Build from DIMACS-style signed 1-based literals."""
        return cls(num_vars, tuple(tuple((abs(k) - 1, k > 0) for k in c) for c in clauses))

    def satisfied_by(self, assignment: Sequence[bool]) -> bool:
        return all(any(assignment[v] == p for v, p in c) for c in self.clauses)


@dataclass(frozen=True)
class NormalizedCnf:
    cnf: Cnf
    trivially_unsat: bool


def normalize_cnf(cnf: Cnf) -> NormalizedCnf:
    out: list[Clause] = []
    seen = set()
    unsat = False
    for clause in cnf.clauses:
        lits = tuple(dict.fromkeys(clause))
        if not lits:
            unsat = True
            continue
        if len({v for v, _ in lits}) < len(lits):
            continue  # tautology
        if len(lits) > 3:
            raise ValueError(f"clause {clause} has more than three variables")
        key = frozenset(lits)
        if key in seen:
            continue
        seen.add(key)
        out.append(lits)
    return NormalizedCnf(Cnf(cnf.num_vars, tuple(out)), unsat)


@dataclass(frozen=True)
class VarMap:
    num_vars: int
    dummy: int | None = None

    def vertex(self, var: int, role: int) -> int:
        return 4 * var + role

    def a(self, var: int) -> int:
        return 4 * var + A

    def s(self, var: int) -> int:
        return 4 * var + S

    def x(self, var: int) -> int:
        return 4 * var + X

    def xbar(self, var: int) -> int:
        return 4 * var + XBAR

    def literal_vertex(self, var: int, positive: bool) -> int:
        return self.x(var) if positive else self.xbar(var)

    def box(self, var: int) -> tuple[int, int, int, int]:
        return (4 * var, 4 * var + 1, 4 * var + 2, 4 * var + 3)

    def box_of(self, v: int) -> int | None:
        if v == self.dummy:
            return None
        return v // 4

    @property
    def board_size(self) -> int:
        return 4 * self.num_vars + (self.dummy is not None)

    def names(self) -> list[str]:
        out = []
        for i in range(1, self.num_vars + 1):
            out += [f"a{i}", f"s{i}", f"x{i}", f"~x{i}"]
        if self.dummy is not None:
            out.append("d")
        return out


@dataclass(frozen=True)
class Reduction:
    spec: GameSpec
    varmap: VarMap


def build_reduction(
    cnf: Cnf, first: Player = Player.ENFORCER, *, subset_boxes: bool = False
) -> Reduction:
    """Game whose winner under perfect play is Avoider iff ``cnf`` is satisfiable.

    ``subset_boxes`` replaces the four triples of each box with the single
    equivalent constraint "at most two of the box".
    """
    if any(not c for c in cnf.clauses):
        raise GameError("formula has an empty clause; it is trivially unsatisfiable")
    n = cnf.num_vars
    varmap = VarMap(n, 4 * n if first is Player.AVOIDER else None)
    constraints = []
    for i in range(n):
        box = varmap.box(i)
        if subset_boxes:
            constraints.append(Constraint(box, 3))
        else:
            constraints.extend(Constraint(t) for t in combinations(box, 3))
    for clause in cnf.clauses:
        members = []
        for var, positive in clause:
            members.append(varmap.s(var))
            members.append(varmap.literal_vertex(var, not positive))
        constraints.append(Constraint(members))
    return Reduction(GameSpec(varmap.board_size, tuple(constraints), first), varmap)


def box_order_restriction(varmap: VarMap) -> tuple[tuple[int, int], ...]:
    """Within each box: a before both literals, both literals before s."""
    pairs = []
    for i in range(varmap.num_vars):
        a, s, x, xb = varmap.box(i)
        pairs += [(a, x), (a, xb), (x, s), (xb, s)]
    return tuple(pairs)


class StrategyError(RuntimeError):
    pass


@dataclass(frozen=True)
class AvoiderStrategy:
    """Avoider's answer-in-the-same-box strategy for a satisfying assignment."""

    assignment: Assignment
    varmap: VarMap

    def preference(self, var: int) -> tuple[int, ...]:
        vm = self.varmap
        true_lit = vm.literal_vertex(var, self.assignment[var])
        false_lit = vm.literal_vertex(var, not self.assignment[var])
        return (true_lit, vm.a(var), vm.s(var), false_lit)

    def move(self, spec: GameSpec, pos: Position, enforcer_last_move: int | None) -> int:
        return avoider_strategy_move(self, spec, pos, enforcer_last_move)


def avoider_strategy_move(
    strategy: AvoiderStrategy, spec: GameSpec, pos: Position, enforcer_last_move: int | None
) -> int:
    vm = strategy.varmap
    claimed = pos.claimed_mask
    if enforcer_last_move is None:
        if vm.dummy is not None and not claimed >> vm.dummy & 1:
            return vm.dummy
        return _free_move(strategy, pos)
    var = vm.box_of(enforcer_last_move)
    if var is None:
        return _free_move(strategy, pos)
    for v in strategy.preference(var):
        if not claimed >> v & 1:
            return v
    return _free_move(strategy, pos)


def _free_move(strategy: AvoiderStrategy, pos: Position) -> int:
    """Move when Enforcer's last move leaves nothing to answer in its box."""
    vm = strategy.varmap
    claimed = pos.claimed_mask
    for i in range(vm.num_vars):
        if not any(claimed >> v & 1 for v in vm.box(i)):
            return vm.a(i)
    for i in range(vm.num_vars):
        if (pos.avoider_mask & sum(1 << v for v in vm.box(i))).bit_count() >= 2:
            continue
        for v in strategy.preference(i):
            if not claimed >> v & 1:
                return v
    raise StrategyError("no safe vertex left for the strategy")


def extract_assignment(varmap: VarMap, final_avoider_set: Iterable[int]) -> Assignment:
    owned = set(final_avoider_set)
    out = []
    for i in range(varmap.num_vars):
        has_x = varmap.x(i) in owned
        has_xbar = varmap.xbar(i) in owned
        if has_x == has_xbar:
            which = "both" if has_x else "neither"
            raise GameError(f"Avoider claimed {which} literal vertices of box {i + 1}")
        out.append(has_x)
    return tuple(out)


@dataclass(frozen=True)
class VerifyReport:
    name: str
    sat: bool
    winner: Player | None  # None when the solver ran out of budget
    nodes: int
    elapsed_ms: int

    @property
    def consistent(self) -> bool:
        return self.winner is not None and self.sat == (self.winner is Player.AVOIDER)


def verify_instance(
    cnf: Cnf, name: str = "instance", *, pruning: bool = True, node_limit: int | None = None
) -> VerifyReport:
    """Compare brute-force satisfiability with the solved reduction game."""
    t0 = time.perf_counter()
    norm = normalize_cnf(cnf)
    if norm.trivially_unsat:
        # An empty clause becomes an empty losing set: Avoider has lost before play starts.
        ms = int((time.perf_counter() - t0) * 1000)
        return VerifyReport(name, False, Player.ENFORCER, 0, ms)
    sat = brute_force_sat(norm.cnf) is not None
    red = build_reduction(norm.cnf, Player.ENFORCER)
    solver = Solver(red.spec, Player.ENFORCER, SolveOptions(pruning=pruning, node_limit=node_limit))
    try:
        winner = solver.solve().winner
    except NodeLimitExceeded:
        winner = None
    ms = int((time.perf_counter() - t0) * 1000)
    return VerifyReport(name, sat, winner, solver.nodes, ms)


def strategy_outcomes(
    strategy: AvoiderStrategy,
    spec: GameSpec,
    first: Player = Player.ENFORCER,
    restriction: Sequence[tuple[int, int]] = (),
):
    """Final Avoider masks over every Enforcer move sequence against ``strategy``.

    ``restriction`` pairs ``(u, v)`` limit Enforcer to claiming v only after u.

    Also checks the strategy's own contract as it goes: answers stay in
    Enforcer's box and Avoider never takes a third vertex of a box.
    Returns ``(final_masks, lines)`` where ``lines`` counts Enforcer sequences.
    """
    vm = strategy.varmap
    full = spec.full_mask
    box_masks = [sum(1 << v for v in vm.box(i)) for i in range(vm.num_vars)]
    preds = [0] * spec.board_size
    for u, v in restriction:
        preds[v] |= 1 << u
    finals: set[int] = set()
    lines = 0

    def avoider_turn(pos: Position, last: int | None) -> None:
        nonlocal lines
        v = strategy.move(spec, pos, last)
        if pos.claimed_mask >> v & 1:
            raise StrategyError(f"strategy chose claimed vertex {v}")
        if last is not None and vm.box_of(last) is not None and vm.box_of(v) != vm.box_of(last):
            box_left = box_masks[vm.box_of(last)] & ~pos.claimed_mask
            if box_left:
                raise StrategyError(f"strategy left box {vm.box_of(last) + 1} after Enforcer played {last}")
        a = pos.avoider_mask | 1 << v
        if any((a & m).bit_count() > 2 for m in box_masks):
            raise StrategyError("strategy took a third vertex of a box")
        nxt = Position(a, pos.enforcer_mask)
        if nxt.claimed_mask == full:
            finals.add(a)
            lines += 1
        else:
            enforcer_turn(nxt)

    def enforcer_turn(pos: Position) -> None:
        nonlocal lines
        free = full & ~pos.claimed_mask
        while free:
            low = free & -free
            free ^= low
            if preds[low.bit_length() - 1] & ~pos.claimed_mask:
                continue
            nxt = Position(pos.avoider_mask, pos.enforcer_mask | low)
            if nxt.claimed_mask == full:
                finals.add(nxt.avoider_mask)
                lines += 1
            else:
                avoider_turn(nxt, low.bit_length() - 1)

    if first is Player.AVOIDER:
        avoider_turn(Position(), None)
    else:
        enforcer_turn(Position())
    return finals, lines
