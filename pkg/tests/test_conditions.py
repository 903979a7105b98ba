import json
import random

import pytest
from hypothesis import given, settings, strategies as st

from baire_games.conditions import (ConditionSet, ConditionSetError, ExtendsWord, FirstLetterAbove, FirstLetterIs,
                                    TableConditionSet, by_name, load, validate_axioms)
from baire_games.tree import Alphabet

EX61, EX62, EX63 = FirstLetterIs(), ExtendsWord(letter_cap=2), FirstLetterAbove()

# independent statements of the three relations
RELATIONS = {
    "ex61": lambda u, b: u[0] == b,
    "ex62": lambda u, b: len(u) >= len(b) and all(u[i] == b[i] for i in range(len(b))),
    "ex63": lambda u, b: u[0] > b,
}

words_st = st.lists(st.integers(0, 4), min_size=1, max_size=6).map(tuple)


def test_satisfaction_examples():
    assert EX63.satisfies((5, 0), 4)
    assert not EX63.satisfies((3,), 4)
    assert EX62.satisfies((2, 3, 4, 9), (2, 3))
    assert not EX62.satisfies((2,), (2, 3))
    assert EX61.satisfies((1, 0), 1) and not EX61.satisfies((0, 1), 1)


def test_ranks():
    assert EX63.rank(17) == 0
    assert EX62.rank((4, 4, 4)) == 3
    assert EX61.rank(1) == 0


def test_distinguishers():
    assert EX61.distinguisher(0) == 1 and EX61.distinguisher(1) == 0
    assert EX63.distinguisher(7) == 7
    assert EX62.distinguisher(0) == (1,)
    assert EX62.distinguisher(5) == (0,)


def test_reductions():
    assert EX62.reduce((2, 3, 4), (2,)) == (3, 4)
    assert EX62.reduce((2, 3), (9,)) is None
    assert EX63.reduce(4, (2,)) is None
    assert EX61.reduce(1, (0,)) is None


def test_enumeration():
    assert EX61.enumerate(5) == [0, 1]
    assert EX63.enumerate(3) == [0, 1, 2]
    assert EX62.enumerate(4) == [(0,), (1,), (0, 0), (0, 1)]
    assert ExtendsWord(letter_cap=3).enumerate(5) == [(0,), (1,), (2,), (0, 0), (0, 1)]


def test_empty_word_rejected():
    for cs in (EX61, EX62, EX63):
        with pytest.raises(ConditionSetError):
            cs.satisfies((), cs.enumerate(1)[0])


def test_format_and_parse():
    assert EX62.format((2, 3)) == "(2,3)"
    assert EX62.parse("(2, 3)") == (2, 3)
    assert EX63.parse("4") == 4
    with pytest.raises(ConditionSetError):
        EX61.parse("2")
    with pytest.raises(ConditionSetError):
        EX63.parse("(1,2)")


@pytest.mark.parametrize("name", ["ex61", "ex62", "ex63"])
@settings(max_examples=150, deadline=None)
@given(u=words_st, v=words_st, seed=st.integers(0, 10 ** 6))
def test_relation_matches_definition(name, u, v, seed):
    cs = by_name(name, letter_cap=3)
    if name == "ex61":
        u = tuple(x % 2 for x in u)
    for b in cs.enumerate(12):
        assert cs.satisfies(u, b) == RELATIONS[name](u, b)
        # extension: satisfaction survives appending letters
        if cs.satisfies(u, b) and (name != "ex61" or all(x < 2 for x in v)):
            assert cs.satisfies(u + v, b)


@pytest.mark.parametrize("name", ["ex62", "ex63"])
@settings(max_examples=100, deadline=None)
@given(u=words_st, w=words_st)
def test_reduction_property(name, u, w):
    cs = by_name(name, letter_cap=3)
    for b in cs.enumerate(14):
        b2 = cs.reduce(b, u)
        if b2 is None:
            continue
        assert not cs.satisfies(u, b)
        assert cs.rank(b2) < cs.rank(b)
        assert cs.satisfies(w, b2) == cs.satisfies(u + w, b)


@pytest.mark.parametrize("name", ["ex61", "ex62", "ex63"])
@settings(max_examples=100, deadline=None)
@given(u=words_st)
def test_distinguisher_property(name, u):
    cs = by_name(name, letter_cap=3)
    if name == "ex61":
        u = tuple(x % 2 for x in u)
    assert not cs.satisfies(u, cs.distinguisher(u[0]))


def test_validator_spec_budgets():
    assert validate_axioms(EX62, max_len=4, letter_cap=3, cond_limit=16).ok
    assert validate_axioms(EX63, max_len=4, letter_cap=6, cond_limit=8).ok


class OnlySingleLetters(FirstLetterIs):
    """u |= b iff u = (b): breaks the extension property."""

    name = "broken61"

    def satisfies(self, u, b):
        return len(u) == 1 and u[0] == b

    def satisfies_all(self, us, b):
        return [self.satisfies(u, b) for u in us]


def test_validator_finds_extension_violation():
    report = validate_axioms(OnlySingleLetters(), max_len=3, letter_cap=2, cond_limit=2)
    kinds = {v.kind for v in report.violations}
    assert "extension" in kinds
    first = next(v for v in report.violations if v.kind == "extension")
    assert first.detail["u"] == (0,) and first.detail["v"] == (0, 0)


class NoReduction(ExtendsWord):
    name = "noreduce"

    def reduce(self, b, u):
        return None


def test_validator_finds_missing_reduction():
    report = validate_axioms(NoReduction(letter_cap=2), max_len=3, letter_cap=2, cond_limit=6)
    assert any(v.kind == "reduction_missing" for v in report.violations)


class WrongDistinguisher(FirstLetterAbove):
    name = "wrongdist"

    def distinguisher(self, x):
        return max(x - 1, 0)


def test_validator_finds_distinguisher_violation():
    report = validate_axioms(WrongDistinguisher(), max_len=2, letter_cap=4, cond_limit=4)
    assert any(v.kind == "distinguisher" for v in report.violations)


def test_validator_parallel_matches_serial():
    a = validate_axioms(NoReduction(letter_cap=2), max_len=3, letter_cap=2, cond_limit=6)
    b = validate_axioms(NoReduction(letter_cap=2), max_len=3, letter_cap=2, cond_limit=6, workers=2)
    assert sorted(map(str, a.violations)) == sorted(map(str, b.violations))


TABLE = {"alphabet": "finite 2", "pairs": [[[0], 0, True], [[0, 0], 0, True], [[0, 1], 0, True],
                                            [[1], 1, True], [[1, 0], 1, True], [[1, 1], 1, True],
                                            [[1], 0, False], [[0], 1, False]],
         "ranks": {"0": 0, "1": 0}}


def test_table_condition_set(tmp_path):
    path = tmp_path / "t.json"
    path.write_text(json.dumps(TABLE))
    cs = load(str(path))
    assert isinstance(cs, TableConditionSet) and cs.bounded_only
    assert cs.satisfies((0, 1), 0) and not cs.satisfies((1,), 0)
    assert cs.distinguisher(0) == 1
    assert validate_axioms(cs, max_len=2, letter_cap=2).ok


def test_table_broken_is_reported():
    data = dict(TABLE, pairs=TABLE["pairs"][:1] + [[[0, 0], 0, False]] + TABLE["pairs"][2:])
    report = validate_axioms(TableConditionSet.from_json(data), max_len=2, letter_cap=2)
    assert not report.ok and report.violations[0].kind == "extension"


def test_malformed_table():
    with pytest.raises(ConditionSetError):
        TableConditionSet.from_json({"pairs": []})


def test_unknown_selector():
    with pytest.raises(ConditionSetError):
        by_name("ex64")


def test_base_class_is_abstract():
    cs = ConditionSet()
    with pytest.raises(NotImplementedError):
        cs.satisfies((0,), 0)
