"""Command line interface: ``baire-games <subcommand> ...``.

Exit codes: 0 success, 1 a check failed, 2 bad input, 3 I/O error,
4 a synthesized strategy faulted or the solver ran out of budget.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from pathlib import Path

from . import conditions as conds_mod
from .bperfect import BPerfectTree
from .conditions import ConditionSetError, validate_axioms
from .games import (GameConfig, IMove, PlayHistory, SolverResourceError, Strategy, SynthesisFault,
                    play, random_strategy, solve_base, solve_finite, strategy_I_from_bperfect,
                    strategy_II_from_cover)
from .product import ProductTree
from .serialize import TreeParseError, parse_tree, serialize_tree, tree_to_dot, tree_to_json
from .smallness import cantor_bendixson, is_b_nowhere_dense, is_superperfect
from .tree import RegularTree, TreeError

EXIT_OK, EXIT_FAILED, EXIT_INPUT, EXIT_IO, EXIT_FAULT = 0, 1, 2, 3, 4


class InputError(Exception):
    pass


def _read(path: str) -> str:
    with open(path) as fh:
        return fh.read()


def load_tree(path: str, product: bool = False):
    try:
        tree = parse_tree(_read(path))
    except TreeParseError as exc:
        raise InputError(f"{path}: {exc}") from exc
    except TreeError as exc:
        raise InputError(f"{path}: {exc}") from exc
    if product != isinstance(tree, ProductTree):
        kind = "a product tree (alphabet ... witness omega)" if product else "a plain tree"
        raise InputError(f"{path}: expected {kind}")
    return tree


def load_cs(selector: str, letter_cap: int):
    try:
        return conds_mod.load(selector, letter_cap=max(letter_cap, 2))
    except ConditionSetError as exc:
        raise InputError(str(exc)) from exc
    except json.JSONDecodeError as exc:
        raise InputError(f"{selector}: line {exc.lineno}, column {exc.colno}: {exc.msg}") from exc


def _dump(obj) -> str:
    return json.dumps(obj, indent=2, sort_keys=True, default=str)


# --- check / decompose / export-dot ---

def cmd_check(args) -> int:
    tree = load_tree(args.tree)
    kernel, pieces, trace = cantor_bendixson(tree)
    report = {
        "states": len(tree.states),
        "empty": tree.is_empty,
        "finitely_branching": tree.is_finitely_branching(),
        "superperfect": is_superperfect(tree),
        "sigma_bounded": kernel.is_empty,
        "kernel_states": len(kernel.states),
        "pieces": len(pieces),
        "iterations": trace.iterations,
    }
    if report["finitely_branching"]:
        report["compact_bound"] = list(tree.compact_bound_prefix(args.depth))
    if args.cs:
        cs = load_cs(args.cs, args.letter_cap)
        mode = "bounded" if cs.bounded_only else args.mode
        budget = {"node_depth": args.depth, "letter_cap": args.letter_cap, "cond_limit": args.cond_limit}
        try:
            w = is_b_nowhere_dense(tree, cs, mode, budget)
        except ConditionSetError as exc:
            raise InputError(str(exc)) from exc
        report["nowhere_dense"] = {"cs": cs.name, "mode": mode, "certified": w is not None,
                                   "witness": w.to_json() if w else None}
    print(_dump(report))
    # with --cs the command is a nowhere-density check and fails when uncertified
    if args.cs and not report["nowhere_dense"]["certified"]:
        return EXIT_FAILED
    return EXIT_OK


def cmd_decompose(args) -> int:
    tree = load_tree(args.tree)
    kernel, pieces, trace = cantor_bendixson(tree)
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    (out / "kernel.tree").write_text(serialize_tree(kernel))
    for i, p in enumerate(pieces):
        (out / f"piece_{i}.tree").write_text(serialize_tree(p.tree))
    meta = trace.to_json()
    meta["pieces"] = [{"file": f"piece_{i}.tree", "iteration": p.iteration, "state": str(p.state),
                       "anchor": list(p.anchor)} for i, p in enumerate(pieces)]
    (out / "trace.json").write_text(_dump(meta) + "\n")
    print(f"kernel_states={len(kernel.states)} pieces={len(pieces)} iterations={trace.iterations}")
    return EXIT_OK


def cmd_export_dot(args) -> int:
    tree = _load_any(args.tree)
    dot = tree_to_dot(tree)
    if args.out:
        Path(args.out).write_text(dot)
    else:
        sys.stdout.write(dot)
    return EXIT_OK


def _load_any(path: str):
    try:
        return parse_tree(_read(path))
    except TreeParseError as exc:
        raise InputError(f"{path}: {exc}") from exc
    except TreeError as exc:
        raise InputError(f"{path}: {exc}") from exc


# --- validate-cs ---

def cmd_validate_cs(args) -> int:
    cs = load_cs(args.cs, args.letter_cap)
    if args.exact and cs.bounded_only:
        raise InputError(f"condition set {cs.name} is a finite table and only supports bounded checks")
    report = validate_axioms(cs, args.max_len, args.letter_cap, args.cond_limit, workers=args.threads)
    if args.json:
        print(_dump(report.to_json()))
    else:
        b = report.budget
        print(f"cs={cs.name} max_len={b['max_len']} letter_cap={b['letter_cap']} "
              f"cond_limit={b['cond_limit']} words={report.notes['words']}")
        for v in report.violations:
            print(f"violation {v}")
        print("ok" if report.ok else f"failed ({len(report.violations)} violations)")
    return EXIT_OK if report.ok else EXIT_FAILED


# --- play / repl / solve ---

def _config(args, cs) -> GameConfig:
    payoff = load_tree(args.payoff) if args.payoff else None
    witness = load_tree(args.witness_payoff, product=True) if args.witness_payoff else None
    if payoff is None and witness is None:
        raise InputError("give --payoff (or --witness-payoff for the witness game)")
    return GameConfig(cs, payoff, horizon=args.horizon, move_len_cap=args.move_len_cap,
                      letter_cap=args.letter_cap, cond_limit=args.cond_limit, witness_payoff=witness)


def _parse_i_move(text: str, witness_mode: bool) -> IMove:
    text = text.strip()
    xi = None
    if text.startswith("[xi="):
        head, _, text = text.partition("]")
        xi = int(head[4:])
    word = tuple(int(x) for x in text.replace(" ", "").split(",") if x)
    if witness_mode and xi is None:
        raise ValueError("witness game: write '[xi=<n>] <letters>'")
    return IMove(word, xi)


def _repl_strategy(side: str, cfg: GameConfig, stdin, stdout) -> Strategy:
    def fn(h: PlayHistory):
        while True:
            stdout.write(f"[{side}] round {h.round}, play so far: {','.join(map(str, h.prefix)) or '()'}\n")
            if side == "I":
                if h.moves:
                    stdout.write(f"condition to meet: {cfg.cs.format(h.moves[-1])}\n")
                stdout.write("move: letters like 0,1" + (" prefixed by [xi=<n>]" if cfg.witness_mode else "") + "\n")
            else:
                shown = ", ".join(cfg.cs.format(b) for b in cfg.conditions())
                stdout.write(f"condition payloads, e.g. {shown}\n")
            stdout.write("> ")
            stdout.flush()
            line = stdin.readline()
            if not line:
                raise InputError("input ended during interactive play")
            try:
                if side == "I":
                    return _parse_i_move(line, cfg.witness_mode)
                return cfg.cs.parse(line)
            except (ValueError, ConditionSetError) as exc:
                stdout.write(f"could not read that move: {exc}\n")
    return Strategy(side, fn, "repl")


def make_strategy(spec: str, side: str, cfg: GameConfig, args) -> Strategy:
    kind, _, arg = spec.partition(":")
    if kind == "random":
        return random_strategy(side, cfg, arg or args.seed)
    if kind == "solver":
        return solve_finite(cfg).strategy_for(side)
    if kind == "repl":
        return _repl_strategy(side, cfg, sys.stdin, sys.stdout)
    if kind == "from-bperfect":
        if side != "I":
            raise InputError("from-bperfect gives a strategy for player I")
        try:
            tree = BPerfectTree.from_json(_read(arg))
        except (TreeError, json.JSONDecodeError) as exc:
            raise InputError(f"{arg}: {exc}") from exc
        return strategy_I_from_bperfect(tree, cfg.cs, letter_cap=cfg.letter_cap)
    if kind == "from-cover":
        if side != "II":
            raise InputError("from-cover gives a strategy for player II")
        files = sorted(Path(arg).glob("*.tree"))
        if not files:
            raise InputError(f"{arg}: no *.tree piece files")
        pieces = [load_tree(str(f)) for f in files]
        try:
            return strategy_II_from_cover(pieces, cfg.cs)
        except ConditionSetError as exc:
            raise InputError(str(exc)) from exc
    if kind == "constant" and side == "II":
        b = cfg.cs.parse(arg)
        return Strategy("II", lambda h: b, spec)
    if kind == "moves" and side == "I":
        moves = [_parse_i_move(m, cfg.witness_mode) for m in arg.split(";")]
        return Strategy("I", lambda h: moves[min(h.round, len(moves) - 1)], spec)
    raise InputError(f"unknown strategy {spec!r} for player {side}")


def _run_play(args, default_i: str, default_ii: str) -> int:
    cs = load_cs(args.cs, args.letter_cap)
    cfg = _config(args, cs)
    try:
        s1 = make_strategy(args.I or default_i, "I", cfg, args)
        s2 = make_strategy(args.II or default_ii, "II", cfg, args)
    except (ValueError, ConditionSetError) as exc:
        raise InputError(str(exc)) from exc
    result = play(cfg, s1, s2)
    sys.stdout.write(result.transcript_json() if args.json else result.transcript())
    return EXIT_OK


def cmd_play(args) -> int:
    if args.repl == "I":
        return _run_play(args, "repl", "random")
    if args.repl == "II":
        return _run_play(args, "random", "repl")
    return _run_play(args, "random", "random")


def cmd_repl(args) -> int:
    if args.side == "I":
        return _run_play(args, "repl", "random")
    return _run_play(args, "random", "repl")


def cmd_solve(args) -> int:
    if args.base:
        payoff = load_tree(args.payoff) if args.payoff else None
        if payoff is None:
            raise InputError("--base needs --payoff")
        sol = solve_base(payoff, args.horizon, args.letter_cap)
        out = {"mode": "base", "winner": sol.winner, "explored": sol.explored}
    else:
        cs = load_cs(args.cs, args.letter_cap)
        cfg = _config(args, cs)
        sol = solve_finite(cfg)
        opening = sol.strategy_for("I")(PlayHistory()) if sol.winner == "I" else None
        out = {"mode": "witness" if cfg.witness_mode else "condition", "winner": sol.winner,
               "explored": sol.explored, "opening": str(opening) if opening else None}
    if args.json:
        print(_dump(out))
    else:
        print(" ".join(f"{k}={v}" for k, v in out.items() if v is not None))
    return EXIT_OK


# --- argument parsing ---

def _game_args(p: argparse.ArgumentParser, need_cs: bool = True):
    p.add_argument("--cs", required=need_cs, default=None, help="ex61, ex62, ex63 or a JSON table")
    p.add_argument("--payoff", help="payoff tree file")
    p.add_argument("--witness-payoff", help="product tree file; switches to the witness game")
    p.add_argument("--horizon", type=int, default=3, help="condition rounds after the opening move")
    p.add_argument("--move-len-cap", type=int, default=2)
    p.add_argument("--letter-cap", type=int, default=3, help="largest letter in a move (inclusive)")
    p.add_argument("--cond-limit", type=int, default=3, help="conditions available to random/solver II")
    p.add_argument("--I", dest="I", help="strategy for player I")
    p.add_argument("--II", dest="II", help="strategy for player II")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="baire-games", description=__doc__.splitlines()[0])
    parser.add_argument("--threads", type=int, default=1, help="worker processes where supported")
    parser.add_argument("--seed", default="0", help="default seed for random strategies")
    parser.add_argument("--json", action="store_true", help="machine-readable output")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("check", help="certificates for a tree, as JSON")
    p.add_argument("tree")
    p.add_argument("--cs")
    p.add_argument("--mode", choices=("exact", "bounded"), default="exact")
    p.add_argument("--depth", type=int, default=4)
    p.add_argument("--letter-cap", type=int, default=8)
    p.add_argument("--cond-limit", type=int, default=8)
    p.set_defaults(func=cmd_check)

    p = sub.add_parser("decompose", help="Cantor-Bendixson kernel and removed pieces")
    p.add_argument("tree")
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_decompose)

    p = sub.add_parser("validate-cs", help="check the condition-set properties on a sample")
    p.add_argument("cs")
    p.add_argument("--max-len", type=int, default=6)
    p.add_argument("--letter-cap", type=int, default=8, help="number of sample letters")
    p.add_argument("--cond-limit", type=int, default=16)
    p.add_argument("--exact", action="store_true", help="refuse condition sets that are finite tables")
    p.set_defaults(func=cmd_validate_cs)

    p = sub.add_parser("play", help="play one game and print the transcript")
    _game_args(p)
    p.add_argument("--repl", nargs="?", const="II", choices=("I", "II"),
                   help="a human plays this side (default II) on stdin")
    p.set_defaults(func=cmd_play)

    p = sub.add_parser("repl", help="play one side interactively")
    _game_args(p)
    p.add_argument("--side", choices=("I", "II"), default="I")
    p.set_defaults(func=cmd_repl)

    p = sub.add_parser("solve", help="solve the finitized game")
    _game_args(p, need_cs=False)
    p.add_argument("--base", action="store_true", help="plain single-letter game on --payoff")
    p.set_defaults(func=cmd_solve)

    p = sub.add_parser("export-dot", help="Graphviz source for a tree")
    p.add_argument("tree")
    p.add_argument("--out")
    p.set_defaults(func=cmd_export_dot)

    # global flags are also accepted after the subcommand
    for action in sub.choices.values():
        action.add_argument("--threads", type=int, default=argparse.SUPPRESS)
        action.add_argument("--seed", default=argparse.SUPPRESS)
        action.add_argument("--json", action="store_true", default=argparse.SUPPRESS)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.command == "solve" and not args.base and not args.cs:
        parser.error("solve needs --cs unless --base is given")
    try:
        return args.func(args)
    except InputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except (TreeError, ConditionSetError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except (SynthesisFault, SolverResourceError) as exc:
        print(f"fault: {exc}", file=sys.stderr)
        return EXIT_FAULT
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
