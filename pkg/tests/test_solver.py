import random

import pytest
from hypothesis import given, settings, strategies as st

from baire_games.conditions import ExtendsWord, FirstLetterAbove, FirstLetterIs
from baire_games.games import GameConfig, PlayHistory, SolverResourceError, play, solve_base, solve_finite
from baire_games.games.engine import as_imove
from baire_games.generators import random_product_tree, random_tree
from baire_games.tree import Alphabet, ChildSpec, RegularTree, constant_branch, full_kary, full_tree

from oracles import i_strategy_survives_all, ii_strategy_beats_all, member, minimax_i_wins, pair_member

EX61, EX62, EX63 = FirstLetterIs(), ExtendsWord(letter_cap=2), FirstLetterAbove()
CANONICAL = [EX61, EX62, EX63]
seeds = st.integers(0, 10 ** 9)


def cylinder0():
    """Binary sequences starting with 0."""
    return RegularTree(Alphabet.finite(2), "r", {"r": ((ChildSpec.of(0), "f"),), "f": ((ChildSpec.every(), "f"),)})


def test_base_game_open_cylinder():
    sol = solve_base(cylinder0(), horizon=2, letter_cap=1)
    assert sol.winner == "I" and sol.strategy(()) == 0


def test_base_game_second_player():
    # II moves second and can always leave a tree that only allows 0 at odd positions
    t = RegularTree(Alphabet.finite(2), 0, {0: ((ChildSpec.every(), 1),), 1: ((ChildSpec.of(0), 0),)})
    sol = solve_base(t, horizon=2, letter_cap=1)
    assert sol.winner == "II" and sol.strategy((0,)) == 1


def test_solver_examples():
    assert solve_finite(GameConfig(EX63, constant_branch(0), horizon=1, move_len_cap=2, letter_cap=2)).winner == "II"
    cfg = GameConfig(EX63, full_kary(4), horizon=2, letter_cap=4, cond_limit=6)
    sol = solve_finite(cfg)
    assert sol.winner == "II"
    assert ii_strategy_beats_all(cfg, sol.strategy)
    assert solve_finite(GameConfig(EX63, full_tree(), horizon=2, letter_cap=3)).winner == "I"


def test_strategy_for_loser_is_best_effort():
    cfg = GameConfig(EX63, full_kary(4), horizon=2, letter_cap=4, cond_limit=6)
    sol = solve_finite(cfg)
    assert sol.strategy_for("II") is sol.strategy
    r = play(cfg, sol.strategy_for("I"), sol.strategy)
    assert r.verdict.kind == "II_wins_at" and r.verdict.reason != "strategy_fault"


def test_node_budget(monkeypatch):
    cfg = GameConfig(EX62, full_tree(), horizon=3, letter_cap=3, cond_limit=3)
    with pytest.raises(SolverResourceError) as err:
        solve_finite(cfg, budget=5)
    assert err.value.explored == 5 and "budget 5" in str(err.value)
    monkeypatch.setenv("BAIRE_GAMES_NODE_BUDGET", "7")
    with pytest.raises(SolverResourceError):
        solve_finite(cfg)
    with pytest.raises(SolverResourceError):
        solve_base(full_tree(Alphabet.finite(2)), horizon=12, letter_cap=1)
    assert solve_base(full_tree(Alphabet.finite(2)), horizon=12, letter_cap=1, budget=12).explored == 12


def _config(rng, tree):
    return GameConfig(rng.choice(CANONICAL), tree, horizon=rng.randint(1, 2), move_len_cap=rng.randint(1, 2),
                      letter_cap=rng.randint(1, 3), cond_limit=rng.randint(1, 3))


@settings(max_examples=60, deadline=None)
@given(seeds)
def test_solver_matches_minimax(seed):
    rng = random.Random(seed)
    t = random_tree(rng, 4)
    if t.is_empty:
        return
    cfg = _config(rng, t)
    sol = solve_finite(cfg)
    assert (sol.winner == "I") == minimax_i_wins(cfg)
    if sol.winner == "I":
        assert i_strategy_survives_all(cfg, sol.strategy)
    else:
        assert ii_strategy_beats_all(cfg, sol.strategy)


def _witness_survives(cfg, strategy):
    def go(h, k):
        m = as_imove(strategy(h), True)
        if m is None or (k >= 1 and not cfg.cs.satisfies(m.word, h.moves[-1])):
            return False
        h = h.then(m)
        if not pair_member(cfg.witness_payoff, list(zip(h.prefix, h.witnesses))):
            return False
        return k == cfg.horizon or all(go(h.then(b), k + 1) for b in cfg.conditions())
    return go(PlayHistory(), 0)


@settings(max_examples=40, deadline=None)
@given(seeds)
def test_witness_solver_strategies_win(seed):
    rng = random.Random(seed)
    p = random_product_tree(rng)
    if p.is_empty:
        return
    cfg = GameConfig(rng.choice(CANONICAL), None, horizon=rng.randint(1, 3), move_len_cap=1, letter_cap=3,
                     cond_limit=rng.randint(1, 3), witness_payoff=p)
    sol = solve_finite(cfg)
    assert _witness_survives(cfg, sol.strategy_for("I")) == (sol.winner == "I")


@settings(max_examples=40, deadline=None)
@given(seeds)
def test_base_solver_matches_brute_force(seed):
    rng = random.Random(seed)
    t = random_tree(rng, 4, Alphabet.finite(2), max_letter=1)
    if t.is_empty:
        return
    horizon = rng.randint(1, 6)

    def i_wins(played):
        if len(played) == horizon:
            return True
        kids = [played + (x,) for x in (0, 1) if member(t, played + (x,))]
        if len(played) % 2 == 0:
            return any(i_wins(w) for w in kids)
        return len(kids) == 2 and all(i_wins(w) for w in kids)

    assert (solve_base(t, horizon, 1).winner == "I") == i_wins(())
