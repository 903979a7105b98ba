"""Finite-horizon play of the condition game.

Round 0: player I opens with a non-empty word ``u0``.  Round ``k >= 1``:
player II names a condition ``b_k`` and player I answers with a non-empty
word ``u_k`` that must satisfy it.  The play is the concatenation of I's
words; I must keep it inside the payoff tree.  A play that survives rounds
``0..horizon`` ends with ``I_alive_at_horizon``.

In the witness variant I also names a natural number ``xi_k`` each round and
the pairs ``(f(j), xi_j)`` must stay inside a product tree.
"""

from __future__ import annotations

import json
import random
from dataclasses import dataclass, field
from itertools import product as cartesian
from typing import Callable, Optional

from ..conditions import ConditionSet
from ..product import ProductTree
from ..tree import RegularTree, TreeError, words


@dataclass(frozen=True)
class GameConfig:
    cs: ConditionSet
    payoff: Optional[RegularTree]
    horizon: int = 3
    move_len_cap: int = 2
    letter_cap: int = 3
    cond_limit: int = 3
    witness_payoff: Optional[ProductTree] = None

    @property
    def witness_mode(self) -> bool:
        return self.witness_payoff is not None

    def conditions(self) -> list:
        return self.cs.enumerate(self.cond_limit)

    def i_moves(self) -> list:
        """Every move allowed by the caps, shortest first."""
        base = list(words(range(self.letter_cap + 1), self.move_len_cap, min_len=1))
        if not self.witness_mode:
            return [IMove(w) for w in base]
        return [IMove(w, xi) for w in base for xi in range(self.letter_cap + 1)]


@dataclass(frozen=True)
class IMove:
    word: tuple
    witness: Optional[int] = None

    def __str__(self) -> str:
        body = ",".join(map(str, self.word))
        return body if self.witness is None else f"[xi={self.witness}] {body}"


@dataclass(frozen=True)
class PlayHistory:
    """Moves so far: I's moves at even positions, conditions at odd positions."""

    moves: tuple = ()

    def then(self, move) -> "PlayHistory":
        return PlayHistory(self.moves + (move,))

    @property
    def i_moves(self) -> tuple:
        return self.moves[0::2]

    @property
    def conditions(self) -> tuple:
        return self.moves[1::2]

    @property
    def prefix(self) -> tuple:
        return tuple(x for m in self.i_moves for x in m.word)

    @property
    def witnesses(self) -> tuple:
        return tuple(m.witness for m in self.i_moves)

    @property
    def to_move(self) -> str:
        return "I" if len(self.moves) % 2 == 0 else "II"

    @property
    def round(self) -> int:
        """Index of the next I move."""
        return (len(self.moves) + 1) // 2


class Strategy:
    """Total move function for one side; ``fn(history)`` returns the next move."""

    def __init__(self, side: str, fn: Callable, name: str = "strategy"):
        if side not in ("I", "II"):
            raise ValueError(f"side must be 'I' or 'II', not {side!r}")
        self.side = side
        self.fn = fn
        self.name = name

    def __call__(self, history: PlayHistory):
        return self.fn(history)

    def __repr__(self) -> str:
        return f"Strategy({self.side}, {self.name})"


@dataclass(frozen=True)
class Verdict:
    kind: str
    round: Optional[int] = None
    reason: Optional[str] = None
    detail: dict = field(default_factory=dict, compare=False)

    @property
    def winner(self) -> str:
        return "II" if self.kind == "II_wins_at" else "I"

    def __str__(self) -> str:
        if self.round is None:
            return self.kind
        return f"{self.kind}({self.round}, {self.reason})"


@dataclass
class PlayResult:
    verdict: Verdict
    history: PlayHistory
    cs: ConditionSet

    def transcript(self) -> str:
        lines = []
        for i, m in enumerate(self.history.moves):
            lines.append(f"I: {m}" if i % 2 == 0 else f"II: b={self.cs.format(m)}")
        lines.append(f"verdict: {self.verdict}")
        return "\n".join(lines) + "\n"

    def to_json(self) -> dict:
        moves = []
        for i, m in enumerate(self.history.moves):
            if i % 2 == 0:
                entry = {"player": "I", "word": list(m.word)}
                if m.witness is not None:
                    entry["xi"] = m.witness
                moves.append(entry)
            else:
                moves.append({"player": "II", "b": list(m) if isinstance(m, tuple) else m})
        v = self.verdict
        return {"moves": moves, "verdict": {"kind": v.kind, "round": v.round, "reason": v.reason,
                                            "text": str(v)}}

    def transcript_json(self) -> str:
        return json.dumps(self.to_json(), sort_keys=True) + "\n"


def as_imove(move, witness_mode: bool) -> Optional[IMove]:
    """Normalise a strategy's output; None marks a malformed move."""
    if isinstance(move, IMove):
        m = move
    elif witness_mode and isinstance(move, tuple) and len(move) == 2 and isinstance(move[0], (tuple, list)):
        m = IMove(tuple(move[0]), move[1])
    elif isinstance(move, (tuple, list)):
        m = IMove(tuple(move))
    else:
        return None
    if not all(isinstance(x, int) and not isinstance(x, bool) for x in m.word):
        return None
    if witness_mode != (m.witness is not None):
        return None
    return m


def i_move_fault(cfg: GameConfig, m: Optional[IMove]) -> Optional[str]:
    if m is None:
        return "malformed move"
    if not m.word:
        return "empty move"
    if len(m.word) > cfg.move_len_cap:
        return f"move longer than {cfg.move_len_cap}"
    if any(x < 0 or x > cfg.letter_cap for x in m.word):
        return f"letter outside 0..{cfg.letter_cap}"
    if cfg.payoff is not None and not all(cfg.payoff.alphabet.contains(x) for x in m.word):
        return "letter outside the payoff alphabet"
    if m.witness is not None and not (0 <= m.witness <= cfg.letter_cap):
        return f"witness outside 0..{cfg.letter_cap}"
    return None


def first_exit(tree: RegularTree, prefix: tuple, start: int = 0) -> Optional[int]:
    """Length of the shortest prefix (longer than ``start``) that is not a node, or None."""
    q = tree.state_at(prefix[:start])
    if q is None:
        return start
    for i in range(start, len(prefix)):
        q = tree.step(q, prefix[i])
        if q is None:
            return i + 1
    return None


def judge_i_move(cfg: GameConfig, history: PlayHistory, m: IMove) -> Optional[Verdict]:
    """Verdict caused by I playing ``m`` after ``history`` (None if the play goes on)."""
    k = history.round
    fault = i_move_fault(cfg, m)
    if fault:
        return Verdict("II_wins_at", k, "strategy_fault", {"side": "I", "fault": fault})
    if k >= 1:
        b = history.moves[-1]
        if not cfg.cs.satisfies(m.word, b):
            return Verdict("II_wins_at", k, "condition_violated", {"u": m.word, "b": b})
    old = history.prefix
    prefix = old + m.word
    if cfg.witness_mode:
        pairs = tuple(zip(prefix, history.witnesses + (m.witness,)))
        if not cfg.witness_payoff.contains_prefix(pairs):
            return Verdict("II_wins_at", k, "left_payoff", {"pairs": pairs})
    else:
        cut = first_exit(cfg.payoff, prefix, len(old))
        if cut is not None:
            return Verdict("II_wins_at", k, "left_payoff", {"prefix": prefix[:cut]})
    return None


def judge_condition(cfg: GameConfig, history: PlayHistory, b) -> Optional[Verdict]:
    try:
        ok = cfg.cs.is_condition(b)
    except TypeError:
        ok = False
    if not ok:
        return Verdict("I_wins_at", history.round, "strategy_fault", {"side": "II", "b": repr(b)})
    return None


def play(cfg: GameConfig, player_i: Strategy, player_ii: Strategy) -> PlayResult:
    """Run the finitized game; faults lose immediately for the faulting side."""
    history = PlayHistory()
    for k in range(cfg.horizon + 1):
        if k >= 1:
            b = player_ii(history)
            verdict = judge_condition(cfg, history, b)
            if verdict:
                return PlayResult(verdict, history, cfg.cs)
            history = history.then(b)
        m = as_imove(player_i(history), cfg.witness_mode)
        verdict = judge_i_move(cfg, history, m)
        if m is not None:
            history = history.then(m)
        if verdict:
            return PlayResult(verdict, history, cfg.cs)
    return PlayResult(Verdict("I_alive_at_horizon"), history, cfg.cs)


# --- simple strategies ---

def constant_condition(b, name: Optional[str] = None) -> Strategy:
    return Strategy("II", lambda h: b, name or f"constant:{b}")


def condition_table(seq, fallback) -> Strategy:
    """II plays ``seq[k-1]`` in round ``k`` and ``fallback`` afterwards."""
    seq = tuple(seq)
    return Strategy("II", lambda h: seq[h.round - 1] if h.round - 1 < len(seq) else fallback,
                    f"table:{seq}")


def move_table(moves) -> Strategy:
    """I plays ``moves[k]`` in round ``k`` (the last one repeated)."""
    moves = tuple(moves)
    return Strategy("I", lambda h: moves[min(h.round, len(moves) - 1)], "table")


def _rng(seed, history: PlayHistory) -> random.Random:
    return random.Random(f"{seed}|{history.moves!r}")


def random_strategy(side: str, cfg: GameConfig, seed, compliant: bool = True) -> Strategy:
    """Seeded strategy; the move depends only on the seed and the history.

    A compliant player I picks uniformly among moves that satisfy the pending
    condition and stay inside the payoff, and among all moves if none does.
    Player II picks among the first ``cond_limit`` conditions.
    """
    if side == "II":
        conds = cfg.conditions()
        return Strategy("II", lambda h: _rng(seed, h).choice(conds), f"random:{seed}")
    moves = cfg.i_moves()

    def fn(h: PlayHistory):
        rng = _rng(seed, h)
        if compliant:
            good = [m for m in moves if judge_i_move(cfg, h, m) is None]
            if good:
                return rng.choice(good)
        return rng.choice(moves)

    return Strategy("I", fn, f"random:{seed}")
