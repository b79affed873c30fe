"""Hypergraph game model for strict and subset Avoider-Enforcer games.

Vertices are dense 0-based integers.  A constraint ``(members, threshold)``
is lost by Avoider once she holds at least ``threshold`` of its members; a
plain losing set is the special case ``threshold == len(members)``.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from functools import cached_property
from itertools import combinations
from typing import Iterable, Sequence

DEFAULT_EXPANSION_CAP = 100_000


class GameError(ValueError):
    """Raised on malformed game input (bad vertex, bad constraint, ...)."""


class ExpansionTooLarge(GameError):
    pass


class Player(enum.Enum):
    AVOIDER = "avoider"
    ENFORCER = "enforcer"

    @property
    def other(self) -> Player:
        return Player.ENFORCER if self is Player.AVOIDER else Player.AVOIDER

    @property
    def letter(self) -> str:
        return "A" if self is Player.AVOIDER else "E"

    @classmethod
    def parse(cls, text: str) -> Player:
        key = text.strip().lower()
        for p in cls:
            if key in (p.value, p.letter.lower()):
                return p
        raise ValueError(f"unknown player {text!r}")

    def __str__(self) -> str:
        return self.value.capitalize()


def to_mask(vertices: Iterable[int]) -> int:
    m = 0
    for v in vertices:
        m |= 1 << v
    return m


def from_mask(mask: int) -> frozenset[int]:
    out = []
    v = 0
    while mask:
        if mask & 1:
            out.append(v)
        mask >>= 1
        v += 1
    return frozenset(out)


@dataclass(frozen=True)
class Constraint:
    members: frozenset[int]
    threshold: int

    def __init__(self, members: Iterable[int], threshold: int | None = None):
        ms = frozenset(int(v) for v in members)
        object.__setattr__(self, "members", ms)
        object.__setattr__(self, "threshold", len(ms) if threshold is None else int(threshold))

    @cached_property
    def mask(self) -> int:
        # Built on first use: a mask is as wide as its largest vertex id.
        return to_mask(self.members)

    @property
    def is_plain(self) -> bool:
        return self.threshold == len(self.members)

    @property
    def key(self) -> tuple[tuple[int, ...], int]:
        """Canonical (sorted members, threshold) key used for deduplication."""
        return tuple(sorted(self.members)), self.threshold

    def __repr__(self) -> str:
        return f"({{{','.join(map(str, sorted(self.members)))}}},{self.threshold})"


@dataclass(frozen=True)
class GameSpec:
    board_size: int
    constraints: tuple[Constraint, ...] = ()
    default_first: Player = Player.ENFORCER

    def __post_init__(self):
        object.__setattr__(self, "constraints", tuple(self.constraints))

    @property
    def is_plain(self) -> bool:
        return all(c.is_plain for c in self.constraints)

    @property
    def full_mask(self) -> int:
        return (1 << self.board_size) - 1

    def normalized(self) -> GameSpec:
        """Drop duplicate constraints, keeping first occurrences."""
        return GameSpec(self.board_size, _dedup(self.constraints), self.default_first)


@dataclass(frozen=True)
class Position:
    """Claimed vertices as bitmasks: bit v set in ``avoider_mask`` means Avoider owns v."""

    avoider_mask: int = 0
    enforcer_mask: int = 0

    @classmethod
    def of(cls, avoider: Iterable[int] = (), enforcer: Iterable[int] = ()) -> Position:
        return cls(to_mask(avoider), to_mask(enforcer))

    @property
    def avoider(self) -> frozenset[int]:
        return from_mask(self.avoider_mask)

    @property
    def enforcer(self) -> frozenset[int]:
        return from_mask(self.enforcer_mask)

    @property
    def claimed_mask(self) -> int:
        return self.avoider_mask | self.enforcer_mask

    @property
    def num_claimed(self) -> int:
        return self.claimed_mask.bit_count()


@dataclass
class ValidationReport:
    defects: list[str]

    @property
    def ok(self) -> bool:
        return not self.defects

    def __bool__(self) -> bool:
        return self.ok


def validate_spec(spec: GameSpec) -> ValidationReport:
    defects = []
    if spec.board_size < 0:
        defects.append(f"board size {spec.board_size} is negative")
    for idx, c in enumerate(spec.constraints):
        if not c.members:
            defects.append(f"constraint {idx}: empty member set")
        for v in sorted(c.members):
            if v < 0 or v >= spec.board_size:
                defects.append(f"constraint {idx}: vertex {v} out of range")
        if c.threshold < 1:
            defects.append(f"constraint {idx}: threshold {c.threshold} < 1")
        elif c.threshold > len(c.members):
            defects.append(f"constraint {idx}: threshold {c.threshold} > |f| = {len(c.members)}")
    return ValidationReport(defects)


def check_vertex(spec: GameSpec, v: int) -> None:
    if not 0 <= v < spec.board_size:
        raise GameError(f"vertex {v} out of range for board of size {spec.board_size}")


def neighborhood(spec: GameSpec, v: int) -> list[Constraint]:
    """L(v): the constraints whose member set contains ``v``, in spec order."""
    check_vertex(spec, v)
    return [c for c in spec.constraints if v in c.members]


def dominates_sets(la: Sequence[tuple[int, int]], lb: Sequence[tuple[int, int]]) -> bool:
    """Dominance over (mask, threshold) lists.

    True iff every pair (f, i) in ``la`` has a pair (g, j) in ``lb`` with
    g a subset of f and j <= i.
    """
    for f, i in la:
        for g, j in lb:
            if j <= i and not g & ~f:
                break
        else:
            return False
    return True


def dominates(spec: GameSpec, a: int, b: int) -> bool:
    """Whether claiming ``a`` is at least as safe as claiming ``b`` for both players."""
    la = [(c.mask, c.threshold) for c in neighborhood(spec, a)]
    lb = [(c.mask, c.threshold) for c in neighborhood(spec, b)]
    return dominates_sets(la, lb)


def expansion_size(spec: GameSpec) -> int:
    return sum(math.comb(len(c.members), c.threshold) for c in spec.constraints)


def expand_to_plain(spec: GameSpec, cap: int = DEFAULT_EXPANSION_CAP) -> GameSpec:
    """Rewrite each (f, i) as all i-subsets of f, giving an equivalent plain game."""
    report = validate_spec(spec)
    if not report.ok:
        raise GameError("; ".join(report.defects))
    total = expansion_size(spec)
    if total > cap:
        raise ExpansionTooLarge(
            f"expansion would generate {total} sets, exceeding cap {cap}"
        )
    out = []
    for c in spec.constraints:
        for sub in combinations(sorted(c.members), c.threshold):
            out.append(Constraint(sub))
    return GameSpec(spec.board_size, _dedup(out), spec.default_first)


def _dedup(constraints: Iterable[Constraint]) -> tuple[Constraint, ...]:
    seen = set()
    out = []
    for c in constraints:
        if c.key not in seen:
            seen.add(c.key)
            out.append(c)
    return tuple(out)
