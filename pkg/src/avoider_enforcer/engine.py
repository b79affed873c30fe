"""Move mechanics, terminal detection and induced (residual) games."""

from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import Iterable

from .core import Constraint, GameError, GameSpec, Player, Position, check_vertex, from_mask, to_mask


class IllegalMove(GameError):
    pass


class GameStatus(enum.Enum):
    ONGOING = "ongoing"
    AVOIDER_WINS = "avoider"
    ENFORCER_WINS = "enforcer"

    @property
    def winner(self) -> Player | None:
        if self is GameStatus.AVOIDER_WINS:
            return Player.AVOIDER
        if self is GameStatus.ENFORCER_WINS:
            return Player.ENFORCER
        return None


def legal_moves(spec: GameSpec, pos: Position) -> frozenset[int]:
    return from_mask(spec.full_mask & ~pos.claimed_mask)


def apply_move(spec: GameSpec, pos: Position, v: int, player: Player) -> Position:
    try:
        check_vertex(spec, v)
    except GameError as exc:
        raise IllegalMove(str(exc)) from None
    bit = 1 << v
    if pos.claimed_mask & bit:
        raise IllegalMove(f"vertex {v} already claimed")
    if player is Player.AVOIDER:
        return Position(pos.avoider_mask | bit, pos.enforcer_mask)
    return Position(pos.avoider_mask, pos.enforcer_mask | bit)


def violated_constraint(spec: GameSpec, avoider_set: Iterable[int] | int) -> Constraint | None:
    a = avoider_set if isinstance(avoider_set, int) else to_mask(avoider_set)
    for c in spec.constraints:
        if (a & c.mask).bit_count() >= c.threshold:
            return c
    return None


def status(spec: GameSpec, pos: Position) -> GameStatus:
    # Violations are monotone in Avoider's set, so a mid-game violation is final.
    if violated_constraint(spec, pos.avoider_mask) is not None:
        return GameStatus.ENFORCER_WINS
    if pos.claimed_mask & spec.full_mask == spec.full_mask:
        return GameStatus.AVOIDER_WINS
    return GameStatus.ONGOING


def to_move(first: Player, pos: Position) -> Player:
    na = pos.avoider_mask.bit_count()
    ne = pos.enforcer_mask.bit_count()
    lead = na - ne if first is Player.AVOIDER else ne - na
    if lead not in (0, 1):
        raise GameError(f"claim counts |A|={na}, |E|={ne} inconsistent with {first} moving first")
    return first if lead == 0 else first.other


@dataclass(frozen=True)
class InducedGame:
    spec: GameSpec
    vertices: tuple[int, ...]  # vertices[new] == old index
    already_lost: bool

    @property
    def index_map(self) -> dict[int, int]:
        """old -> new index for every unclaimed vertex."""
        return {old: new for new, old in enumerate(self.vertices)}


def induced_game(spec: GameSpec, pos: Position) -> InducedGame:
    """Residual game on the unclaimed vertices.

    Each set shrinks to its unclaimed part and its threshold drops by the
    number of members Avoider already holds.  Unreachable sets are deleted;
    a threshold reaching zero sets ``already_lost`` instead.
    """
    a = pos.avoider_mask
    free = spec.full_mask & ~pos.claimed_mask
    vertices = tuple(sorted(from_mask(free)))
    remap = {old: new for new, old in enumerate(vertices)}
    already_lost = False
    out = []
    for c in spec.constraints:
        g = [v for v in c.members if free >> v & 1]
        ig = c.threshold - (c.mask & a).bit_count()
        if ig <= 0:
            already_lost = True
            continue
        if ig > len(g):
            continue
        out.append(Constraint((remap[v] for v in g), ig))
    nclaimed = pos.num_claimed
    first = spec.default_first if nclaimed % 2 == 0 else spec.default_first.other
    return InducedGame(GameSpec(len(vertices), tuple(out), first), vertices, already_lost)
