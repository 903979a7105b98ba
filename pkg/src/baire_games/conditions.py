"""Condition sets: the conditions player II may impose on player I's moves.

A condition set supplies a satisfaction relation between non-empty finite
sequences and conditions, together with

* ``rank(b)``: a natural number that strictly drops under reduction,
* ``distinguisher(x)``: a condition no sequence starting with ``x`` satisfies,
* ``reduce(b, u)``: when ``u`` fails ``b`` but some extension of ``u``
  satisfies it, a condition ``b2`` of smaller rank with
  ``w |= b2  <=>  u + w |= b`` for every non-empty ``w``,
* ``enumerate(limit)``: the first ``limit`` conditions in a fixed order.

The three required properties (satisfaction is preserved by extension,
distinguishers exist, reduction exists) are checked on a finite sample by
:func:`validate_axioms`.
"""

from __future__ import annotations

import json
import os
from dataclasses import dataclass, field
from itertools import islice
from typing import Iterable, Optional, Sequence

from .tree import Alphabet, words


class ConditionSetError(ValueError):
    """Bad input for a condition set, or a request it cannot honour."""


class ConditionSet:
    """Base class; subclasses implement the hooks below."""

    name = "custom"
    #: exact checkers refuse condition sets flagged bounded-only
    bounded_only = False
    alphabet = Alphabet.omega()

    def satisfies(self, u: Sequence[int], b) -> bool:
        raise NotImplementedError

    def satisfies_all(self, us: Sequence, b) -> list:
        """``[satisfies(u, b) for u in us]``; subclasses may override with a faster loop."""
        sat = self.satisfies
        return [sat(u, b) for u in us]

    def rank(self, b) -> int:
        raise NotImplementedError

    def distinguisher(self, x: int):
        raise NotImplementedError

    def reduce(self, b, u: Sequence[int]):
        raise NotImplementedError

    def enumerate(self, limit: int) -> list:
        raise NotImplementedError

    def is_condition(self, b) -> bool:
        raise NotImplementedError

    def format(self, b) -> str:
        if isinstance(b, tuple):
            return "(" + ",".join(map(str, b)) + ")"
        return str(b)

    def parse(self, text: str):
        text = text.strip()
        if text.startswith("("):
            body = text.strip("()")
            b = tuple(int(x) for x in body.split(",")) if body else ()
        else:
            b = int(text)
        if not self.is_condition(b):
            raise ConditionSetError(f"{text!r} is not a condition of {self.name}")
        return b

    def __repr__(self) -> str:
        return f"<{type(self).__name__} {self.name}>"


class FirstLetterIs(ConditionSet):
    """Binary alphabet; ``u |= b`` iff ``u`` starts with ``b``.

    Every rank is zero and reduction never applies: if ``u`` fails ``b`` its
    first letter is wrong and so is every extension's.
    """

    name = "ex61"

    def __init__(self):
        self.alphabet = Alphabet.finite(2)

    def satisfies(self, u, b) -> bool:
        if not u:
            raise ConditionSetError("moves are non-empty words")
        return u[0] == b

    def rank(self, b) -> int:
        return 0

    def distinguisher(self, x):
        return 1 - x if x in (0, 1) else 1

    def reduce(self, b, u):
        return None

    def enumerate(self, limit):
        return [0, 1][:max(limit, 0)]

    def is_condition(self, b) -> bool:
        return b in (0, 1) and not isinstance(b, bool)


class ExtendsWord(ConditionSet):
    """``u |= b`` iff ``u`` extends the non-empty word ``b``; ``rank(b) = len(b)``.

    ``letter_cap`` bounds the letters used when enumerating conditions.
    """

    name = "ex62"

    def __init__(self, letter_cap: int = 2, alphabet: Alphabet = Alphabet.omega()):
        if alphabet.size is not None:
            letter_cap = min(letter_cap, alphabet.size)
        if letter_cap < 2:
            raise ConditionSetError("ex62 needs at least two letters")
        self.letter_cap = letter_cap
        self.alphabet = alphabet

    def satisfies(self, u, b) -> bool:
        if not u:
            raise ConditionSetError("moves are non-empty words")
        return len(u) >= len(b) and tuple(u[:len(b)]) == b

    def satisfies_all(self, us, b) -> list:
        n = len(b)
        return [u[:n] == b for u in us]

    def rank(self, b) -> int:
        return len(b)

    def distinguisher(self, x):
        return (1,) if x == 0 else (0,)

    def reduce(self, b, u):
        n = len(u)
        if n < len(b) and tuple(b[:n]) == tuple(u):
            return b[n:]
        return None

    def enumerate(self, limit):
        return list(islice(words(range(self.letter_cap), 1 << 30, min_len=1), max(limit, 0)))

    def is_condition(self, b) -> bool:
        return (isinstance(b, tuple) and len(b) > 0
                and all(self.alphabet.contains(x) for x in b))


class FirstLetterAbove(ConditionSet):
    """Letters are naturals; ``u |= b`` iff the first letter of ``u`` exceeds ``b``."""

    name = "ex63"

    def satisfies(self, u, b) -> bool:
        if not u:
            raise ConditionSetError("moves are non-empty words")
        return u[0] > b

    def satisfies_all(self, us, b) -> list:
        return [bool(u) and u[0] > b for u in us]

    def rank(self, b) -> int:
        return 0

    def distinguisher(self, x):
        return x

    def reduce(self, b, u):
        return None

    def enumerate(self, limit):
        return list(range(max(limit, 0)))

    def is_condition(self, b) -> bool:
        return isinstance(b, int) and not isinstance(b, bool) and b >= 0


def _freeze(value):
    return tuple(_freeze(v) for v in value) if isinstance(value, list) else value


class TableConditionSet(ConditionSet):
    """Condition set given by an explicit finite table of satisfied pairs.

    Pairs not listed count as unsatisfied.  Distinguishers and reductions are
    searched among the listed conditions, so the set is only meaningful up to
    the table's extent and exact checkers refuse it.
    """

    bounded_only = True

    def __init__(self, alphabet: Alphabet, pairs: Iterable, ranks: dict, name: str = "table"):
        self.alphabet = alphabet
        self.name = name
        self._sat = set()
        self._conds = []
        self._sample = set()
        for u, b, ok in pairs:
            u, b = _freeze(u), _freeze(b)
            if b not in self._conds:
                self._conds.append(b)
            self._sample.add(u)
            if ok:
                self._sat.add((u, b))
        self._ranks = {}
        for key, r in ranks.items():
            self._ranks[self._key(key)] = int(r)
        for b in self._conds:
            if b not in self._ranks:
                self._ranks[b] = 0

    def _key(self, key):
        if isinstance(key, str):
            try:
                return _freeze(json.loads(key))
            except ValueError:
                return key
        return _freeze(key)

    @classmethod
    def from_json(cls, data) -> "TableConditionSet":
        if isinstance(data, str):
            data = json.loads(data)
        try:
            alpha = data["alphabet"]
            if alpha == "omega":
                alphabet = Alphabet.omega()
            else:
                alphabet = Alphabet.finite(int(str(alpha).split()[-1]))
            return cls(alphabet, data["pairs"], data.get("ranks", {}), data.get("name", "table"))
        except (KeyError, TypeError, ValueError) as exc:
            raise ConditionSetError(f"malformed condition table: {exc}") from exc

    def satisfies(self, u, b) -> bool:
        return (tuple(u), b) in self._sat

    def rank(self, b) -> int:
        return self._ranks.get(b, 0)

    def distinguisher(self, x):
        for b in self._conds:
            if not any(u and u[0] == x and (u, b) in self._sat for u in self._sample):
                return b
        raise ConditionSetError(f"no listed condition distinguishes letter {x}")

    def reduce(self, b, u):
        u = tuple(u)
        if self.satisfies(u, b):
            return None
        if not any(v[:len(u)] == u and len(v) > len(u) and (v, b) in self._sat for v in self._sample):
            return None
        for b2 in self._conds:
            if self.rank(b2) >= self.rank(b):
                continue
            if all(self.satisfies(w, b2) == self.satisfies(u + w, b)
                   for w in self._sample if w and u + w in self._sample):
                return b2
        return None

    def enumerate(self, limit):
        return self._conds[:max(limit, 0)]

    def is_condition(self, b) -> bool:
        return b in self._conds


def by_name(name: str, letter_cap: int = 2) -> ConditionSet:
    """Canonical condition sets by selector: ``ex61``, ``ex62`` or ``ex63``."""
    if name == "ex61":
        return FirstLetterIs()
    if name == "ex62":
        return ExtendsWord(letter_cap=letter_cap)
    if name == "ex63":
        return FirstLetterAbove()
    raise ConditionSetError(f"unknown condition set {name!r} (expected ex61, ex62, ex63 or a JSON table)")


def load(selector: str, letter_cap: int = 2) -> ConditionSet:
    """Selector name or path to a JSON table."""
    if selector in ("ex61", "ex62", "ex63"):
        return by_name(selector, letter_cap)
    if not os.path.exists(selector):
        raise ConditionSetError(f"unknown condition set {selector!r} (use ex61, ex62, ex63 or a JSON table file)")
    with open(selector) as fh:
        return TableConditionSet.from_json(json.load(fh))


# --- sampled validation of the three properties ---

@dataclass
class Violation:
    kind: str
    detail: dict

    def __str__(self) -> str:
        return f"{self.kind}: " + ", ".join(f"{k}={v}" for k, v in self.detail.items())


@dataclass
class Report:
    """Outcome of a bounded check; ``ok`` iff no violation was found."""

    violations: list = field(default_factory=list)
    budget: dict = field(default_factory=dict)
    notes: dict = field(default_factory=dict)

    @property
    def ok(self) -> bool:
        return not self.violations

    def to_json(self) -> dict:
        return {"ok": self.ok, "budget": self.budget, "notes": self.notes,
                "violations": [{"kind": v.kind, **{k: _jsonable(x) for k, x in v.detail.items()}}
                               for v in self.violations]}


def _jsonable(x):
    if isinstance(x, tuple):
        return [_jsonable(v) for v in x]
    return x


def validate_axioms(cs: ConditionSet, max_len: int = 6, letter_cap: int = 8,
                    cond_limit: int = 16, max_violations: int = 20, workers: int = 1) -> Report:
    """Check the three properties on all words of length ``1..max_len`` over ``0..letter_cap-1``.

    * extension: ``u |= b`` implies ``u + (x,) |= b`` (one-letter steps suffice
      by transitivity);
    * distinguisher: no sampled word starting with ``x`` satisfies ``distinguisher(x)``;
    * reduction: whenever a sampled ``u`` fails ``b`` and a sampled strict
      extension satisfies it, ``reduce(b, u)`` has smaller rank and agrees
      with ``b`` after ``u`` on every sampled continuation.

    With ``workers > 1`` the conditions are split across worker processes.
    """
    letters = list(range(letter_cap if cs.alphabet.is_omega else min(letter_cap, cs.alphabet.size)))
    conds = cs.enumerate(cond_limit)
    budget = {"max_len": max_len, "letter_cap": letter_cap, "cond_limit": cond_limit}
    report = Report(budget=budget, notes={"conditions": len(conds)})
    levels = _levels(letters, max_len)
    report.notes["words"] = sum(len(lvl) for lvl in levels[1:])

    if workers > 1 and len(conds) > 1:
        from concurrent.futures import ProcessPoolExecutor
        chunks = [conds[i::workers] for i in range(workers)]
        with ProcessPoolExecutor(max_workers=workers) as pool:
            found = [v for part in pool.map(_check_conditions, [cs] * workers, chunks,
                                            [letters] * workers, [max_len] * workers,
                                            [max_violations] * workers)
                     for v in part]
    else:
        found = _check_conditions(cs, conds, letters, max_len, max_violations, levels)
    report.violations.extend(found[:max_violations])

    k = len(letters)
    for i, x in enumerate(letters):
        try:
            b = cs.distinguisher(x)
        except ConditionSetError:
            if len(report.violations) < max_violations:
                report.violations.append(Violation("distinguisher_missing", {"x": x}))
            continue
        for n in range(1, max_len + 1):
            block = k ** (n - 1)
            chunk = levels[n][i * block:(i + 1) * block]
            hits = cs.satisfies_all(chunk, b)
            if any(hits):
                if len(report.violations) < max_violations:
                    report.violations.append(Violation("distinguisher", {"x": x, "b": b, "u": chunk[hits.index(True)]}))
                break
    return report


def _levels(letters, max_len):
    levels = [[()]]
    for _ in range(max_len):
        levels.append([w + (x,) for w in levels[-1] for x in letters])
    return levels


def _check_conditions(cs, conds, letters, max_len, max_violations, levels=None) -> list:
    """Extension and reduction violations for each condition in ``conds``."""
    if levels is None:
        levels = _levels(letters, max_len)
    k = len(letters)
    out = []

    def add(kind, **detail):
        if len(out) < max_violations:
            out.append(Violation(kind, detail))

    for b in conds:
        # truth values per level, in the same order as ``levels``
        table = [None] + [cs.satisfies_all(lvl, b) for lvl in levels[1:]]
        for n in range(1, max_len):
            row, nxt = table[n], table[n + 1]
            for i, ok in enumerate(row):
                if ok and not all(nxt[i * k:(i + 1) * k]):
                    j = next(j for j in range(k) if not nxt[i * k + j])
                    add("extension", u=levels[n][i], v=levels[n + 1][i * k + j], b=b)
        # some strict extension (inside the sample) satisfies b
        below = [None] * (max_len + 1)
        below[max_len] = [False] * len(levels[max_len])
        for n in range(max_len - 1, 0, -1):
            nxt_sat, nxt_below = table[n + 1], below[n + 1]
            merged = [p or q for p, q in zip(nxt_sat, nxt_below)]
            below[n] = [any(group) for group in zip(*[iter(merged)] * k)]
        for n in range(1, max_len):
            for i, u in enumerate(levels[n]):
                if table[n][i] or not below[n][i]:
                    continue
                b2 = cs.reduce(b, u)
                if b2 is None:
                    add("reduction_missing", u=u, b=b)
                    continue
                if cs.rank(b2) >= cs.rank(b):
                    add("reduction_rank", u=u, b=b, reduced=b2)
                    continue
                _check_reduction(cs, b, u, b2, i, table, levels, max_len, add)
    return out


def _check_reduction(cs, b, u, b2, index, table, levels, max_len, add):
    n, k = len(u), len(levels[1])
    for m in range(1, max_len - n + 1):
        block = k ** m
        after_u = table[n + m][index * block:(index + 1) * block]
        reduced = cs.satisfies_all(levels[m], b2)
        if after_u != reduced:
            j = next(j for j in range(block) if after_u[j] != reduced[j])
            add("reduction_equivalence", u=u, b=b, reduced=b2, w=levels[m][j])
            return
