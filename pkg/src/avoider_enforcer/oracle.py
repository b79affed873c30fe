"""Brute-force reference answers used to cross-check the solver and reduction.

Nothing here shares code with the solver's search: no table, no move
filtering, no early exit on dead games.
"""

from __future__ import annotations

from .core import GameError, GameSpec, Player, validate_spec

MAX_SAT_VARS = 26
MAX_GAME_VERTICES = 14


class OracleBudgetExceeded(RuntimeError):
    pass


def brute_force_sat(cnf) -> tuple[bool, ...] | None:
    """Lowest satisfying assignment, enumerating with variable 0 as the low bit."""
    n = cnf.num_vars
    if n > MAX_SAT_VARS:
        raise OracleBudgetExceeded(f"{n} variables exceed the oracle budget of {MAX_SAT_VARS}")
    clauses = []
    for clause in cnf.clauses:
        pos = neg = 0
        for var, positive in clause:
            if positive:
                pos |= 1 << var
            else:
                neg |= 1 << var
        clauses.append((pos, neg))
    full = (1 << n) - 1
    for bits in range(1 << n):
        inv = full & ~bits
        if all(bits & p or inv & q for p, q in clauses):
            return tuple(bool(bits >> i & 1) for i in range(n))
    return None


def brute_force_game(spec: GameSpec, first: Player | None = None) -> Player:
    """Winner under perfect play by plain full-width minimax."""
    first = first or spec.default_first
    if spec.board_size > MAX_GAME_VERTICES:
        raise OracleBudgetExceeded(
            f"board of {spec.board_size} vertices exceeds the oracle budget of {MAX_GAME_VERTICES}"
        )
    report = validate_spec(spec)
    if not report.ok:
        raise GameError("; ".join(report.defects))
    sets = [(c.mask, c.threshold) for c in spec.constraints]
    n = spec.board_size

    def lost(a: int) -> bool:
        return any((a & m).bit_count() >= t for m, t in sets)

    def avoider_wins(a: int, e: int, mover: Player) -> bool:
        free = [v for v in range(n) if not (a | e) >> v & 1]
        if not free:
            return True
        if mover is Player.AVOIDER:
            for v in free:
                na = a | (1 << v)
                if not lost(na) and avoider_wins(na, e, Player.ENFORCER):
                    return True
            return False
        for v in free:
            if not avoider_wins(a, e | (1 << v), Player.AVOIDER):
                return False
        return True

    if lost(0):
        return Player.ENFORCER
    return Player.AVOIDER if avoider_wins(0, 0, first) else Player.ENFORCER
