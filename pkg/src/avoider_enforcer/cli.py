"""Command-line entry point: ``aegame {solve,reduce,verify,play,gen,bench}``.

Exit codes: ``solve`` returns 0 when Avoider wins and 1 when Enforcer wins;
every other command returns 0 on success and 1 on a failed check.  Any
usage, input or budget error returns 2.
"""

from __future__ import annotations

import argparse
import random
import sys
import time
from concurrent.futures import ProcessPoolExecutor
from pathlib import Path
from typing import Callable, Sequence, TextIO

from .core import GameError, GameSpec, Player, Position
from .engine import GameStatus, apply_move, legal_moves, status, to_move, violated_constraint
from .formats import ParseError, game_names, parse_dimacs, parse_game, report_line, serialize_game
from .generate import random_cnf, random_game
from .reduction import build_reduction, normalize_cnf, verify_instance
from .solver import NodeLimitExceeded, SolveOptions, Solver

EXIT_OK = EXIT_AVOIDER = 0
EXIT_FAIL = EXIT_ENFORCER = 1
EXIT_ERROR = 2


class CliError(Exception):
    pass


def _player(text: str) -> Player:
    try:
        return Player.parse(text)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def _label(v: int, names: Sequence[str] | None) -> str:
    if names and v < len(names):
        return f"{names[v]}({v})"
    return str(v)


def _labels(vs, names) -> str:
    return "{" + ", ".join(_label(v, names) for v in sorted(vs)) + "}"


def _read_game(path: str) -> tuple[GameSpec, list[str] | None]:
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise CliError(f"cannot read {path}: {exc.strerror}") from None
    try:
        return parse_game(text), game_names(text)
    except ParseError as exc:
        raise CliError(f"{path}: {exc}") from None


def cmd_solve(args, out: TextIO) -> int:
    spec, names = _read_game(args.game)
    first = args.first or spec.default_first
    opts = SolveOptions(pruning=not args.no_pruning, node_limit=args.node_limit, collect_pv=args.pv)
    t0 = time.perf_counter()
    try:
        result = Solver(spec, first, opts).solve()
    except NodeLimitExceeded as exc:
        raise CliError(str(exc)) from None
    ms = int((time.perf_counter() - t0) * 1000)
    print(f"winner: {result.winner}", file=out)
    print(f"first: {first}", file=out)
    print(f"nodes: {result.nodes_expanded}", file=out)
    print(f"table hits: {result.table_hits}", file=out)
    print(f"ms: {ms}", file=out)
    if result.principal_variation is not None:
        print("pv: " + " ".join(_label(v, names) for v in result.principal_variation), file=out)
    return EXIT_AVOIDER if result.winner is Player.AVOIDER else EXIT_ENFORCER


def cmd_reduce(args, out: TextIO) -> int:
    cnf = _read_cnf(args.cnf)
    norm = normalize_cnf(cnf)
    if norm.trivially_unsat:
        raise CliError(f"{args.cnf}: formula contains an empty clause (trivially unsatisfiable)")
    red = build_reduction(norm.cnf, args.first)
    text = serialize_game(
        red.spec,
        names=red.varmap.names(),
        comments=[f"reduction of {Path(args.cnf).name}: {cnf.num_vars} variables, "
                  f"{len(norm.cnf.clauses)} clauses after normalization"],
    )
    summary = f"{red.spec.board_size} vertices, {len(red.spec.constraints)} sets"
    if args.output:
        Path(args.output).write_text(text)
        print(summary, file=out)
    else:
        out.write(text)
        print(summary, file=sys.stderr)
    return EXIT_OK


def _read_cnf(path: str):
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise CliError(f"cannot read {path}: {exc.strerror}") from None
    try:
        return parse_dimacs(text)
    except ParseError as exc:
        raise CliError(f"{path}: {exc}") from None


def _verify_file(path: str, node_limit: int | None) -> tuple[str, bool]:
    """One report line for a DIMACS file and whether it passed."""
    name = Path(path).name
    try:
        cnf = parse_dimacs(Path(path).read_text())
        report = verify_instance(cnf, name, node_limit=node_limit)
    except (OSError, ParseError, ValueError) as exc:
        return f"{name} error={str(exc).replace(' ', '_')}", False
    return report_line(report), report.consistent


def cmd_verify(args, out: TextIO) -> int:
    paths = list(args.cnf)
    if args.dir:
        d = Path(args.dir)
        if not d.is_dir():
            raise CliError(f"{d} is not a directory")
        paths += sorted(str(p) for p in d.iterdir() if p.suffix == ".cnf")
    if not paths:
        raise CliError("no instances given (pass CNF files or --dir)")
    if args.jobs > 1:
        with ProcessPoolExecutor(args.jobs) as pool:
            rows = list(pool.map(_verify_file, paths, [args.node_limit] * len(paths)))
    else:
        rows = [_verify_file(p, args.node_limit) for p in paths]
    text = "".join(line + "\n" for line, _ in rows)
    if args.report:
        Path(args.report).write_text(text)
    out.write(text)
    return EXIT_OK if all(ok for _, ok in rows) else EXIT_FAIL


def cmd_gen(args, out: TextIO) -> int:
    rng = random.Random(args.seed)
    try:
        spec = random_game(rng, args.vertices, args.sets, args.max_size, args.subset, args.first)
    except ValueError as exc:
        raise CliError(str(exc)) from None
    comment = (f"gen --vertices {args.vertices} --sets {args.sets} --max-size {args.max_size}"
               f"{' --subset' if args.subset else ''} --seed {args.seed}")
    text = serialize_game(spec, comments=[comment])
    if args.output:
        Path(args.output).write_text(text)
    else:
        out.write(text)
    return EXIT_OK


def cmd_bench(args, out: TextIO) -> int:
    rng = random.Random(args.seed)
    ok = True
    if args.suite == "theorem1":
        print(f"{'instance':<12} {'m':>3} {'sat':>3} {'winner':>6} {'ok':>2} {'nodes':>8} {'ms':>7}", file=out)
        for k in range(args.samples):
            cnf = random_cnf(rng, args.n, rng.randint(1, 2 * args.n))
            r = verify_instance(cnf, f"t1-{k}")
            ok &= r.consistent
            print(f"{r.name:<12} {len(cnf.clauses):>3} {int(r.sat):>3} "
                  f"{r.winner.letter if r.winner else '?':>6} {int(r.consistent):>2} "
                  f"{r.nodes:>8} {r.elapsed_ms:>7}", file=out)
    else:
        print(f"{'instance':<12} {'pruned':>8} {'unpruned':>9} {'ms_p':>7} {'ms_u':>7} {'winner':>6}", file=out)
        for k in range(args.samples):
            spec = random_game(rng, args.n, rng.randint(1, 10), min(args.n, 5), rng.random() < 0.5)
            row = []
            winners = set()
            for pruning in (True, False):
                t0 = time.perf_counter()
                solver = Solver(spec, Player.ENFORCER, SolveOptions(pruning=pruning))
                winners.add(solver.solve().winner)
                row += [solver.nodes, int((time.perf_counter() - t0) * 1000)]
            ok &= len(winners) == 1 and row[0] <= row[2]
            print(f"{'p-' + str(k):<12} {row[0]:>8} {row[2]:>9} {row[1]:>7} {row[3]:>7} "
                  f"{winners.pop().letter if len(winners) == 1 else '?':>6}", file=out)
    return EXIT_OK if ok else EXIT_FAIL


def play_session(
    spec: GameSpec,
    human: Player,
    opponent: str = "optimal",
    seed: int | None = None,
    names: Sequence[str] | None = None,
    read: Callable[[str], str] | None = None,
    out: TextIO = sys.stdout,
) -> GameStatus:
    """Interactive game: the human plays one side, the engine the other."""
    read = read or input
    first = spec.default_first
    rng = random.Random(seed)
    engine = Solver(spec, first) if opponent == "optimal" else None
    lookup = {name: i for i, name in enumerate(names or ())}
    pos = Position()
    print(f"You play {human}; {first} moves first. Enter a vertex id or name, 'q' to quit.", file=out)
    while (st := status(spec, pos)) is GameStatus.ONGOING:
        mover = to_move(first, pos)
        free = sorted(legal_moves(spec, pos))
        print(f"Avoider: {_labels(pos.avoider, names)}  Enforcer: {_labels(pos.enforcer, names)}", file=out)
        print(f"Unclaimed: {_labels(free, names)}", file=out)
        if mover is human:
            while True:
                try:
                    text = read(f"{mover}> ").strip()
                except EOFError:
                    print("Input closed; game abandoned.", file=out)
                    return GameStatus.ONGOING
                if text in ("q", "quit"):
                    print("Game abandoned.", file=out)
                    return GameStatus.ONGOING
                v = lookup.get(text)
                if v is None:
                    try:
                        v = int(text)
                    except ValueError:
                        print(f"Not a vertex: {text!r}", file=out)
                        continue
                try:
                    pos = apply_move(spec, pos, v, mover)
                    break
                except GameError as exc:
                    print(f"Illegal move: {exc}", file=out)
        else:
            v = engine.best_move(pos).vertex if engine else rng.choice(free)
            print(f"{mover} claims {_label(v, names)}", file=out)
            pos = apply_move(spec, pos, v, mover)
    if st is GameStatus.ENFORCER_WINS:
        lost = violated_constraint(spec, pos.avoider_mask)
        print(f"Enforcer wins: losing set {_labels(lost.members, names)} claimed by Avoider"
              f" (threshold {lost.threshold})", file=out)
    else:
        print("Avoider wins: the board is full and no losing set was claimed", file=out)
    return st


def cmd_play(args, out: TextIO) -> int:
    spec, names = _read_game(args.game)
    if args.first:
        spec = GameSpec(spec.board_size, spec.constraints, args.first)
    st = play_session(spec, args.as_, args.opponent, args.seed, names, out=out)
    if st is GameStatus.ONGOING:
        return EXIT_ERROR
    return EXIT_AVOIDER if st is GameStatus.AVOIDER_WINS else EXIT_ENFORCER


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="aegame", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("solve", help="solve a game file under perfect play")
    p.add_argument("game")
    p.add_argument("--first", type=_player, help="override the file's first player")
    p.add_argument("--no-pruning", action="store_true")
    p.add_argument("--pv", action="store_true", help="print a principal variation")
    p.add_argument("--node-limit", type=int)
    p.set_defaults(func=cmd_solve)

    p = sub.add_parser("reduce", help="build the game for a DIMACS CNF")
    p.add_argument("cnf")
    p.add_argument("-o", "--output")
    p.add_argument("--first", type=_player, default=Player.ENFORCER)
    p.set_defaults(func=cmd_reduce)

    p = sub.add_parser("verify", help="check satisfiability against the solved reduction")
    p.add_argument("cnf", nargs="*")
    p.add_argument("--dir")
    p.add_argument("--report")
    p.add_argument("--node-limit", type=int)
    p.add_argument("--jobs", type=int, default=1)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("play", help="play interactively against the engine")
    p.add_argument("game")
    p.add_argument("--as", dest="as_", type=_player, default=Player.AVOIDER)
    p.add_argument("--opponent", choices=("optimal", "random"), default="optimal")
    p.add_argument("--first", type=_player)
    p.add_argument("--seed", type=int)
    p.set_defaults(func=cmd_play)

    p = sub.add_parser("gen", help="write a seeded random game")
    p.add_argument("--vertices", type=int, required=True)
    p.add_argument("--sets", type=int, required=True)
    p.add_argument("--max-size", type=int, required=True)
    p.add_argument("--subset", action="store_true", help="random thresholds in [1, size]")
    p.add_argument("--first", type=_player, default=Player.ENFORCER)
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("-o", "--output")
    p.set_defaults(func=cmd_gen)

    p = sub.add_parser("bench", help="timing tables")
    p.add_argument("--suite", choices=("theorem1", "pruning"), required=True)
    p.add_argument("--n", type=int, default=3)
    p.add_argument("--samples", type=int, default=10)
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=cmd_bench)
    return parser


def main(argv: Sequence[str] | None = None, out: TextIO | None = None) -> int:
    out = out or sys.stdout
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_ERROR if exc.code else EXIT_OK
    try:
        return args.func(args, out)
    except (CliError, GameError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ERROR


def main_entry() -> None:
    sys.exit(main())


if __name__ == "__main__":
    main_entry()
