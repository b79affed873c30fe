"""Text formats: DIMACS CNF input, the game-spec format and verification reports.

Game format, one directive per line::

    # comment
    vertices <N>
    first <avoider|enforcer>        (optional, default enforcer)
    set <threshold> <v1> ... <vk>   (0-based vertex ids, any number of lines)

``serialize_game`` writes members sorted ascending and keeps constraint
order, so parse/serialize round-trips byte for byte on canonical specs.
A ``# names: ...`` comment, when present, carries display aliases.
"""

from __future__ import annotations

from typing import Iterable, Sequence

from .core import Constraint, GameSpec, Player
from .reduction import Cnf, VerifyReport

NAMES_PREFIX = "# names:"


class ParseError(ValueError):
    def __init__(self, line: int, message: str):
        super().__init__(f"line {line}: {message}")
        self.line = line
        self.message = message


def parse_dimacs(text: str) -> Cnf:
    num_vars = num_clauses = None
    header_line = 0
    clauses: list[list[int]] = []
    current: list[int] = []
    lineno = 0
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("c"):
            continue
        if line.startswith("%"):
            break  # legacy terminator used by some benchmark archives
        if line.startswith("p"):
            if num_vars is not None:
                raise ParseError(lineno, "duplicate problem line")
            parts = line.split()
            if len(parts) != 4 or parts[1] != "cnf":
                raise ParseError(lineno, f"malformed problem line {line!r}")
            try:
                num_vars, num_clauses = int(parts[2]), int(parts[3])
            except ValueError:
                raise ParseError(lineno, f"malformed problem line {line!r}") from None
            if num_vars < 0 or num_clauses < 0:
                raise ParseError(lineno, "negative counts in problem line")
            header_line = lineno
            continue
        if num_vars is None:
            raise ParseError(lineno, "clause before 'p cnf' header")
        for tok in line.split():
            try:
                k = int(tok)
            except ValueError:
                raise ParseError(lineno, f"bad literal {tok!r}") from None
            if k == 0:
                clauses.append(current)
                current = []
            elif abs(k) > num_vars:
                raise ParseError(lineno, f"literal {k} exceeds {num_vars} variables")
            else:
                current.append(k)
    if num_vars is None:
        raise ParseError(max(lineno, 1), "missing 'p cnf' header")
    if current:
        raise ParseError(lineno, "final clause is not terminated by 0")
    if len(clauses) != num_clauses:
        raise ParseError(
            header_line, f"header declares {num_clauses} clauses but {len(clauses)} were read"
        )
    return Cnf.from_ints(num_vars, clauses)


def serialize_dimacs(cnf: Cnf) -> str:
    lines = [f"p cnf {cnf.num_vars} {len(cnf.clauses)}"]
    for clause in cnf.clauses:
        lits = [str(v + 1 if p else -(v + 1)) for v, p in clause]
        lines.append(" ".join(lits + ["0"]))
    return "\n".join(lines) + "\n"


def parse_game(text: str) -> GameSpec:
    board = None
    first = None
    sets: list[tuple[int, int, list[int]]] = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        word, *args = line.split()
        if word == "vertices":
            if board is not None:
                raise ParseError(lineno, "duplicate 'vertices' line")
            if len(args) != 1:
                raise ParseError(lineno, "'vertices' takes exactly one count")
            board = _int(args[0], lineno)
            if board < 0:
                raise ParseError(lineno, "vertex count must be non-negative")
        elif word == "first":
            if first is not None:
                raise ParseError(lineno, "duplicate 'first' line")
            if len(args) != 1:
                raise ParseError(lineno, "'first' takes one player name")
            try:
                first = Player.parse(args[0])
            except ValueError:
                raise ParseError(lineno, f"unknown player {args[0]!r}") from None
        elif word == "set":
            if not args:
                raise ParseError(lineno, "'set' needs a threshold")
            threshold = _int(args[0], lineno)
            members = [_int(a, lineno) for a in args[1:]]
            if not members:
                raise ParseError(lineno, "empty set")
            if len(set(members)) != len(members):
                raise ParseError(lineno, "repeated vertex in set")
            if threshold < 1:
                raise ParseError(lineno, f"threshold {threshold} < 1")
            if threshold > len(members):
                raise ParseError(lineno, f"threshold {threshold} > set size {len(members)}")
            sets.append((lineno, threshold, members))
        else:
            raise ParseError(lineno, f"unknown directive {word!r}")
    if board is None:
        raise ParseError(1, "missing 'vertices' line")
    for lineno, _, members in sets:
        for v in members:
            if not 0 <= v < board:
                raise ParseError(lineno, f"vertex {v} out of range for {board} vertices")
    constraints = tuple(Constraint(m, t) for _, t, m in sets)
    return GameSpec(board, constraints, first or Player.ENFORCER)


def _int(tok: str, lineno: int) -> int:
    try:
        return int(tok)
    except ValueError:
        raise ParseError(lineno, f"expected an integer, got {tok!r}") from None


def serialize_game(
    spec: GameSpec, names: Sequence[str] | None = None, comments: Iterable[str] = ()
) -> str:
    lines = [f"# {c}" for c in comments]
    if names is not None:
        lines.append(f"{NAMES_PREFIX} {' '.join(names)}")
    lines.append(f"vertices {spec.board_size}")
    lines.append(f"first {spec.default_first.value}")
    for c in spec.constraints:
        lines.append(" ".join(["set", str(c.threshold)] + [str(v) for v in sorted(c.members)]))
    return "\n".join(lines) + "\n"


def game_names(text: str) -> list[str] | None:
    """Display aliases from a ``# names:`` comment, if the file has one."""
    for line in text.splitlines():
        if line.startswith(NAMES_PREFIX):
            return line[len(NAMES_PREFIX):].split()
    return None


def report_line(r: VerifyReport) -> str:
    winner = r.winner.letter if r.winner is not None else "?"
    return (
        f"{r.name} sat={int(r.sat)} winner={winner} consistent={int(r.consistent)} "
        f"nodes={r.nodes} ms={r.elapsed_ms}"
    )


def write_report(results: Iterable[VerifyReport]) -> str:
    return "".join(report_line(r) + "\n" for r in results)
