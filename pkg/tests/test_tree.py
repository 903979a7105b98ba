import random

import pytest
from hypothesis import given, settings, strategies as st

from baire_games.generators import random_tree, tree_corpus
from baire_games.tree import (Alphabet, ChildSpec, RegularTree, TreeError, compatible, constant_branch,
                              full_kary, full_tree, is_prefix, two_branch, word_then, words)

from oracles import member, nodes_to_depth, relevant_letters

OMEGA = Alphabet.omega()
seeds = st.integers(0, 10 ** 9)


def test_child_spec_letters():
    assert ChildSpec.of(3, 1, 1).letters == (1, 3)
    assert ChildSpec.above(2).contains(3) and not ChildSpec.above(2).contains(2)
    assert ChildSpec.every().contains(10 ** 9)
    assert list(ChildSpec.above(2).iter_letters(OMEGA, 5)) == [3, 4, 5]
    assert list(ChildSpec.every().iter_letters(Alphabet.finite(3))) == [0, 1, 2]
    with pytest.raises(TreeError):
        list(ChildSpec.every().iter_letters(OMEGA))


def test_finiteness_is_relative_to_alphabet():
    assert not ChildSpec.every().is_finite(OMEGA)
    assert ChildSpec.every().is_finite(Alphabet.finite(2))
    assert full_tree(Alphabet.finite(2)).is_finitely_branching()
    assert not full_tree().is_finitely_branching()


@pytest.mark.parametrize("bad", [
    lambda: ChildSpec.of(),
    lambda: ChildSpec.of(-1),
    lambda: ChildSpec("maybe"),
    lambda: ChildSpec.above(-1),
])
def test_child_spec_rejects(bad):
    with pytest.raises(TreeError):
        bad()


def test_constructor_rejects_non_canonical():
    s = ChildSpec.of(0)
    with pytest.raises(TreeError, match="overlap"):
        RegularTree(OMEGA, 0, {0: ((ChildSpec.of(0, 1), 0), (ChildSpec.of(1), 0))})
    with pytest.raises(TreeError, match="dead"):
        RegularTree(OMEGA, 0, {0: ((s, 1),), 1: ()})
    with pytest.raises(TreeError, match="unreachable"):
        RegularTree(OMEGA, 0, {0: ((s, 0),), 1: ((s, 1),)})
    with pytest.raises(TreeError, match="omega"):
        RegularTree(Alphabet.finite(2), 0, {0: ((ChildSpec.above(0), 0),)})
    with pytest.raises(TreeError, match="alphabet"):
        RegularTree(Alphabet.finite(2), 0, {0: ((ChildSpec.of(2), 0),)})


def test_pruned_drops_dead_and_unreachable():
    t = RegularTree.pruned(OMEGA, 0, {0: ((ChildSpec.of(0), 1), (ChildSpec.of(1), 2)),
                                      1: (), 2: ((ChildSpec.of(5), 2),), 3: ((ChildSpec.of(0), 3),)})
    assert t.states == {0, 2}
    assert RegularTree.pruned(OMEGA, 0, {0: ((ChildSpec.of(0), 1),)}).is_empty


def test_membership_and_children():
    t = two_branch()
    assert t.contains_prefix((0, 7, 100))
    assert t.contains_prefix((1, 1, 1))
    assert not t.contains_prefix((1, 0))
    assert not t.contains_prefix((2,))
    assert t.children((1,)) == [1]
    assert t.children((0,), cap=3) == [0, 1, 2, 3]
    with pytest.raises(TreeError):
        full_tree(Alphabet.finite(2)).state_at((2,))


def test_compact_bound_prefix():
    t = RegularTree(OMEGA, "a", {"a": ((ChildSpec.of(0, 7), "b"),), "b": ((ChildSpec.of(0), "b"),)})
    assert t.compact_bound_prefix(2) == (7, 0)
    assert full_kary(4).compact_bound_prefix(3) == (3, 3, 3)
    with pytest.raises(TreeError):
        full_tree().compact_bound_prefix(1)


def test_enumerate_nodes_is_shortlex():
    nodes = full_kary(2).enumerate_nodes(2)
    assert nodes == [(), (0,), (1,), (0, 0), (0, 1), (1, 0), (1, 1)]
    with pytest.raises(TreeError):
        full_tree().enumerate_nodes(1)


def test_word_then_and_shortest_words():
    t = word_then((2, 5), constant_branch(1))
    assert t.contains_prefix((2, 5, 1, 1)) and not t.contains_prefix((2, 4))
    short = two_branch().shortest_words()
    assert short == {"r": (), "full": (0,), "ones": (1,)}


def test_words_helper():
    assert list(words([0, 1], 2, min_len=1)) == [(0,), (1,), (0, 0), (0, 1), (1, 0), (1, 1)]
    assert is_prefix((1,), (1, 2)) and not is_prefix((2,), (1, 2))
    assert compatible((1, 2), (1,)) and not compatible((1, 2), (1, 3))


@settings(max_examples=60, deadline=None)
@given(seeds)
def test_generated_trees_are_canonical_and_pruned(seed):
    t = random_tree(random.Random(seed))
    if t.is_empty:
        return
    assert len(t.states) <= 6
    # every node has a child: the tree is pruned
    letters = relevant_letters(t) + [10 ** 6]
    for u in nodes_to_depth(t, 3, max(letters[:-1])):
        assert any(member(t, u + (x,)) for x in letters)


@settings(max_examples=60, deadline=None)
@given(seeds)
def test_membership_matches_raw_walk(seed):
    t = random_tree(random.Random(seed))
    rng = random.Random(seed + 1)
    for _ in range(30):
        u = tuple(rng.randrange(8) for _ in range(rng.randrange(6)))
        assert t.contains_prefix(u) == member(t, u)


@settings(max_examples=40, deadline=None)
@given(seeds)
def test_enumerate_nodes_matches_oracle(seed):
    t = random_tree(random.Random(seed))
    assert set(t.enumerate_nodes(4, 4)) == nodes_to_depth(t, 4, 4)


@settings(max_examples=40, deadline=None)
@given(seeds)
def test_relabel_preserves_nodes(seed):
    t = random_tree(random.Random(seed))
    assert nodes_to_depth(t.relabel(), 4, 5) == nodes_to_depth(t, 4, 5)


def test_corpus_is_reproducible():
    assert tree_corpus(10, seed=3) == tree_corpus(10, seed=3)
