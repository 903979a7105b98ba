"""Backward induction on the finitized game.

Positions are collapsed by what the future depends on: the payoff state of
the play so far, the round and the pending condition (in the witness game,
the product-tree state plus the letters not yet paired with a witness).
Every explored position counts against a node budget, read from the
environment variable ``BAIRE_GAMES_NODE_BUDGET`` (default 2,000,000).
"""

from __future__ import annotations

import os
from dataclasses import dataclass
from typing import Optional

from ..tree import RegularTree
from .engine import GameConfig, IMove, PlayHistory, Strategy

DEFAULT_NODE_BUDGET = 2_000_000


class SolverResourceError(RuntimeError):
    """The node budget ran out; ``explored`` positions were evaluated before that."""

    def __init__(self, budget: int, explored: int, pending: int):
        self.budget = budget
        self.explored = explored
        self.pending = pending
        super().__init__(f"node budget {budget} exceeded after {explored} positions "
                         f"({pending} still open on the search stack)")


def node_budget() -> int:
    raw = os.environ.get("BAIRE_GAMES_NODE_BUDGET")
    return int(raw) if raw else DEFAULT_NODE_BUDGET


@dataclass
class Solution:
    winner: str
    strategy: Strategy
    explored: int
    solver: Optional["_Solver"] = None

    def strategy_for(self, side: str) -> Strategy:
        """The winner's strategy, or the loser's best try (first move that is not an immediate loss)."""
        if side == self.winner or self.solver is None:
            if side != self.winner:
                raise ValueError(f"no strategy recorded for player {side}")
            return self.strategy
        return self.solver.strategy_i() if side == "I" else self.solver.strategy_ii()


class _Solver:
    def __init__(self, cfg: GameConfig, budget: Optional[int] = None):
        self.cfg = cfg
        self.budget = node_budget() if budget is None else budget
        self.moves = cfg.i_moves()
        self.conds = cfg.conditions()
        self.memo_i: dict = {}
        self.memo_ii: dict = {}
        self.explored = 0
        self.depth = 0

    def _count(self):
        if self.explored >= self.budget:
            raise SolverResourceError(self.budget, self.explored, self.depth)
        self.explored += 1

    # position after I's move: (key, round just played)
    def advance(self, key, m: IMove):
        """Key after I plays ``m`` from ``key``, or None if the play leaves the payoff."""
        cfg = self.cfg
        if not cfg.witness_mode:
            q = key
            for x in m.word:
                q = cfg.payoff.step(q, x)
                if q is None:
                    return None
            return q
        q, pending = key
        letters = pending + m.word
        q = cfg.witness_payoff.step_pair(q, (letters[0], m.witness))
        if q is None:
            return None
        return (q, letters[1:])

    def start_key(self):
        cfg = self.cfg
        if cfg.witness_mode:
            return None if cfg.witness_payoff.is_empty else (cfg.witness_payoff.start, ())
        return cfg.payoff.start

    def good_moves(self, key, k, b):
        for m in self.moves:
            if k >= 1 and not self.cfg.cs.satisfies(m.word, b):
                continue
            nk = self.advance(key, m)
            if nk is not None:
                yield m, nk

    def i_wins(self, key, k, b) -> bool:
        """I to move in round ``k`` facing condition ``b`` (None in round 0)."""
        memo_key = (key, k, b)
        hit = self.memo_i.get(memo_key)
        if hit is not None:
            return hit
        self._count()
        self.depth += 1
        result = any(k == self.cfg.horizon or self.i_survives(nk, k + 1)
                     for _, nk in self.good_moves(key, k, b))
        self.depth -= 1
        self.memo_i[memo_key] = result
        return result

    def i_survives(self, key, k) -> bool:
        """II to name the condition of round ``k``."""
        memo_key = (key, k)
        hit = self.memo_ii.get(memo_key)
        if hit is not None:
            return hit
        self._count()
        self.depth += 1
        result = all(self.i_wins(key, k, b) for b in self.conds)
        self.depth -= 1
        self.memo_ii[memo_key] = result
        return result

    def key_of(self, h: PlayHistory):
        """Replay ``h`` to its key; None once the play has left the payoff."""
        key = self.start_key()
        for m in h.i_moves:
            if key is None:
                return None
            key = self.advance(key, m)
        return key

    def strategy_i(self) -> Strategy:
        def fn(h: PlayHistory):
            key = self.key_of(h)
            k = h.round
            b = h.moves[-1] if k >= 1 else None
            fallback = None
            if key is not None:
                for m, nk in self.good_moves(key, k, b):
                    if k == self.cfg.horizon or self.i_survives(nk, k + 1):
                        return m
                    fallback = fallback or m
            return fallback or self.moves[0]
        return Strategy("I", fn, "solver")

    def strategy_ii(self) -> Strategy:
        def fn(h: PlayHistory):
            key = self.key_of(h)
            if key is None:
                return self.conds[0]
            for b in self.conds:
                if not self.i_wins(key, h.round, b):
                    return b
            return self.conds[0]
        return Strategy("II", fn, "solver")


def solve_finite(cfg: GameConfig, budget: Optional[int] = None) -> Solution:
    """Winner of the finitized game and a strategy for the winner.

    Player I wins iff she can survive rounds ``0..horizon`` against every
    choice among the first ``cond_limit`` conditions, using moves within the
    caps.  Raises :class:`SolverResourceError` when the budget runs out.
    """
    if not cfg.conditions():
        raise ValueError("cond_limit must allow at least one condition")
    s = _Solver(cfg, budget)
    key = s.start_key()
    i_wins = key is not None and s.i_wins(key, 0, None)
    if i_wins:
        return Solution("I", s.strategy_i(), s.explored, s)
    return Solution("II", s.strategy_ii(), s.explored, s)


# --- the plain game: single letters, alternating, closed payoff ---

@dataclass
class BaseSolution:
    winner: str
    strategy: Strategy
    explored: int


def solve_base(payoff: RegularTree, horizon: int, letter_cap: int, budget: Optional[int] = None) -> BaseSolution:
    """Single-letter game: I plays positions 0, 2, 4, ..., II plays 1, 3, 5, ...

    I wins iff the play stays inside ``payoff`` for ``horizon`` letters.  The
    returned strategy maps the tuple of letters played so far to a letter.
    """
    limit = node_budget() if budget is None else budget
    letters = [x for x in range(letter_cap + 1) if payoff.alphabet.contains(x)]
    memo: dict = {}
    explored = [0]

    def i_wins(q, n) -> bool:
        if n == horizon:
            return True
        if (q, n) in memo:
            return memo[(q, n)]
        if explored[0] >= limit:
            raise SolverResourceError(limit, explored[0], n)
        explored[0] += 1
        nxt = [payoff.step(q, x) for x in letters]
        if n % 2 == 0:
            r = any(t is not None and i_wins(t, n + 1) for t in nxt)
        else:
            r = all(t is not None and i_wins(t, n + 1) for t in nxt)
        memo[(q, n)] = r
        return r

    win = payoff.start is not None and i_wins(payoff.start, 0)
    side = "I" if win else "II"

    def fn(played: tuple):
        q = payoff.state_at(played)
        n = len(played)
        for x in letters:
            t = payoff.step(q, x) if q is not None else None
            ok = t is not None and i_wins(t, n + 1)
            if (side == "I") == ok:
                return x
        return letters[0]

    return BaseSolution(side, Strategy(side, fn, "solver"), explored[0])
