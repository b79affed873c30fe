"""Exact win/loss solver with a transposition table.

Positions are keyed by the (Avoider mask, Enforcer mask) pair; the player to
move follows from parity, so one table serves one first-player setting.

Two optional move filters shrink the tree:

* dominance pruning -- in the residual game at each node, a vertex b is
  dropped when some other unclaimed a dominates it (every residual set
  through a has a tighter-or-equal residual set through b).  Either player
  may then prefer a, so only non-dominated moves are searched.  Among
  mutually dominating vertices the lowest index is kept.
* order restriction -- pairs ``(u, v)`` forbid claiming v before u.
"""

from __future__ import annotations

import sys
from dataclasses import dataclass
from typing import Sequence

from .core import GameError, GameSpec, Player, Position, validate_spec
from .engine import GameStatus, status, to_move


class NodeLimitExceeded(RuntimeError):
    """The search needed more nodes than ``SolveOptions.node_limit`` allows."""

    def __init__(self, limit: int):
        super().__init__(f"resource exhausted: node limit {limit} exceeded")
        self.limit = limit


@dataclass(frozen=True)
class SolveOptions:
    pruning: bool = True
    order_restriction: tuple[tuple[int, int], ...] | None = None
    node_limit: int | None = None
    collect_pv: bool = False

    def __post_init__(self):
        if self.order_restriction is not None:
            object.__setattr__(
                self, "order_restriction", tuple((int(u), int(v)) for u, v in self.order_restriction)
            )
            _check_acyclic(self.order_restriction)
        if self.node_limit is not None and self.node_limit < 1:
            raise ValueError("node_limit must be positive")


@dataclass(frozen=True)
class SolveResult:
    winner: Player
    nodes_expanded: int
    table_hits: int
    principal_variation: tuple[int, ...] | None = None


@dataclass(frozen=True)
class MoveChoice:
    vertex: int
    winning: bool  # False means every candidate loses; vertex is the lowest-index fallback


def _check_acyclic(pairs: Sequence[tuple[int, int]]) -> None:
    succ: dict[int, list[int]] = {}
    for u, v in pairs:
        if u == v:
            raise ValueError(f"order restriction has self-loop on {u}")
        succ.setdefault(u, []).append(v)
    state: dict[int, int] = {}
    for root in list(succ):
        if state.get(root):
            continue
        stack = [(root, iter(succ.get(root, ())))]
        state[root] = 1
        while stack:
            node, it = stack[-1]
            nxt = next(it, None)
            if nxt is None:
                state[node] = 2
                stack.pop()
            elif state.get(nxt) == 1:
                raise ValueError("order restriction contains a cycle")
            elif not state.get(nxt):
                state[nxt] = 1
                stack.append((nxt, iter(succ.get(nxt, ()))))


def _bits(mask: int) -> list[int]:
    out = []
    while mask:
        low = mask & -mask
        out.append(low.bit_length() - 1)
        mask ^= low
    return out


class Solver:
    """Solver for one (spec, first player, options) triple.

    The instance owns its table; reuse it to answer many positions of the
    same game cheaply.
    """

    def __init__(self, spec: GameSpec, first: Player, options: SolveOptions | None = None):
        report = validate_spec(spec)
        if not report.ok:
            raise GameError("; ".join(report.defects))
        self.spec = spec
        self.first = first
        self.options = options or SolveOptions()
        self.n = spec.board_size
        self.full = spec.full_mask
        self._sets = [(c.mask, c.threshold) for c in spec.constraints]
        self._by_vertex: list[list[tuple[int, int]]] = [[] for _ in range(self.n)]
        for m, t in self._sets:
            for v in _bits(m):
                self._by_vertex[v].append((m, t))
        self._preds = [0] * self.n
        for u, v in self.options.order_restriction or ():
            if not (0 <= u < self.n and 0 <= v < self.n):
                raise GameError(f"order restriction ({u}, {v}) out of range")
            self._preds[v] |= 1 << u
        self._restricted = self.options.order_restriction is not None
        self._table: dict[int, bool] = {}
        self.nodes = 0
        self.hits = 0

    # -- public API ---------------------------------------------------

    def solve(self, pos: Position | None = None) -> SolveResult:
        pos = pos or Position()
        avoider_wins = self.avoider_wins(pos)
        pv = tuple(self.principal_variation(pos)) if self.options.collect_pv else None
        winner = Player.AVOIDER if avoider_wins else Player.ENFORCER
        return SolveResult(winner, self.nodes, self.hits, pv)

    def avoider_wins(self, pos: Position) -> bool:
        to_move(self.first, pos)
        st = status(self.spec, pos)
        if st is not GameStatus.ONGOING:
            self.nodes = max(self.nodes, 1)
            return st is GameStatus.AVOIDER_WINS
        limit = max(sys.getrecursionlimit(), 4 * self.n + 100)
        sys.setrecursionlimit(limit)
        return self._search(pos.avoider_mask, pos.enforcer_mask)

    def candidates(self, pos: Position) -> list[int]:
        free = self.full & ~pos.claimed_mask
        return self._filter(free, self._live(pos.avoider_mask, free))

    def best_move(self, pos: Position) -> MoveChoice:
        mover = to_move(self.first, pos)
        if status(self.spec, pos) is not GameStatus.ONGOING:
            raise GameError("game is already over")
        moves = self.candidates(pos)
        for v in moves:
            if self._child_avoider_wins(pos.avoider_mask, pos.enforcer_mask, v, mover) == (
                mover is Player.AVOIDER
            ):
                return MoveChoice(v, True)
        return MoveChoice(moves[0], False)

    def principal_variation(self, pos: Position | None = None) -> list[int]:
        pos = pos or Position()
        line = []
        while status(self.spec, pos) is GameStatus.ONGOING:
            mover = to_move(self.first, pos)
            v = self.best_move(pos).vertex
            line.append(v)
            bit = 1 << v
            if mover is Player.AVOIDER:
                pos = Position(pos.avoider_mask | bit, pos.enforcer_mask)
            else:
                pos = Position(pos.avoider_mask, pos.enforcer_mask | bit)
        return line

    # -- search -------------------------------------------------------

    def _violates(self, a: int, v: int) -> bool:
        for m, t in self._by_vertex[v]:
            if (a & m).bit_count() >= t:
                return True
        return False

    def _child_avoider_wins(self, a: int, e: int, v: int, mover: Player) -> bool:
        bit = 1 << v
        if mover is Player.AVOIDER:
            a |= bit
            if self._violates(a, v):
                return False
        else:
            e |= bit
        if a | e == self.full:
            return True
        return self._search(a, e)

    def _search(self, a: int, e: int) -> bool:
        """Avoider wins from the non-terminal position (a, e)?"""
        key = (a << self.n) | e
        table = self._table
        hit = table.get(key)
        if hit is not None:
            self.hits += 1
            return hit
        self.nodes += 1
        limit = self.options.node_limit
        if limit is not None and self.nodes > limit:
            raise NodeLimitExceeded(limit)

        free = self.full & ~(a | e)
        live = self._live(a, free)
        full = self.full
        if not live:
            result = True  # no residual set can still be completed
        elif ((a | e).bit_count() % 2 == 0) == (self.first is Player.AVOIDER):
            result = False
            for v in _by_danger(self._filter(free, live), live):
                na = a | (1 << v)
                if self._violates(na, v):
                    continue
                if na | e == full or self._search(na, e):
                    result = True
                    break
        else:
            result = True
            for v in _by_danger(self._filter(free, live), live):
                ne = e | (1 << v)
                if ne | a != full and not self._search(a, ne):
                    result = False
                    break
        table[key] = result
        return result

    def _live(self, a: int, free: int) -> list[tuple[int, int]]:
        """Residual (set, remaining threshold) pairs that Avoider can still complete."""
        live = []
        for m, t in self._sets:
            g = m & free
            need = t - (m & a).bit_count()
            if need <= g.bit_count():
                live.append((g, need))
        return live

    def _filter(self, free: int, live: list[tuple[int, int]]) -> list[int]:
        moves = _bits(free)
        if self._restricted:
            preds = self._preds
            moves = [v for v in moves if not preds[v] & free]
        if not self.options.pruning or len(moves) < 2:
            return moves
        return _undominated(moves, live, free)


def _by_danger(moves: list[int], live: list[tuple[int, int]]) -> list[int]:
    """Search order only: least threatened vertex first.

    A residual set needing k more Avoider claims weighs 2**-k.  Both players
    like claiming quiet vertices, so one ordering serves both sides.
    """
    if len(moves) < 2:
        return moves
    danger = dict.fromkeys(moves, 0.0)
    for g, need in live:
        w = 2.0 ** -need
        for v in moves:
            if g >> v & 1:
                danger[v] += w
    return sorted(moves, key=danger.__getitem__)


def _undominated(moves: list[int], live: list[tuple[int, int]], free: int) -> list[int]:
    by_v: dict[int, list[tuple[int, int]]] = {v: [] for v in moves}
    for g, need in live:
        for v in moves:
            if g >> v & 1:
                by_v[v].append((g, need))
    # Every set through a must pass through b, so b lies in the intersection.
    inter = {}
    for v in moves:
        x = free
        for g, _ in by_v[v]:
            x &= g
        inter[v] = x

    def dom(x: int, y: int) -> bool:
        if not inter[x] >> y & 1:
            return False
        ly = by_v[y]
        for f, i in by_v[x]:
            for g, j in ly:
                if j <= i and not g & ~f:
                    break
            else:
                return False
        return True

    keep = []
    for b in moves:
        for a in moves:
            if a != b and dom(a, b) and (a < b or not dom(b, a)):
                break
        else:
            keep.append(b)
    return keep


def solve(spec: GameSpec, first: Player | None = None, options: SolveOptions | None = None) -> SolveResult:
    first = first or spec.default_first
    return Solver(spec, first, options).solve()


def candidate_moves(
    spec: GameSpec, pos: Position, options: SolveOptions | None = None
) -> list[int]:
    """Moves the solver searches from ``pos``, in index order."""
    return Solver(spec, spec.default_first, options).candidates(pos)


def best_move(
    spec: GameSpec, pos: Position, first: Player | None = None, options: SolveOptions | None = None
) -> MoveChoice:
    return Solver(spec, first or spec.default_first, options).best_move(pos)
