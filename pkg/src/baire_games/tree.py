"""Finite-state representation of pruned trees over countable alphabets.

A :class:`RegularTree` is a deterministic automaton whose edges are labelled
by symbolic letter sets (:class:`ChildSpec`).  The nodes of the tree are the
finite words the automaton can read from its start state; since every state
has at least one outgoing edge, the tree has no leaves and stands for a
closed subset of ``X^omega``.
"""

from __future__ import annotations

import heapq
from dataclasses import dataclass, field
from typing import Hashable, Iterable, Iterator, Mapping, Optional, Sequence

State = Hashable
Word = tuple


class TreeError(ValueError):
    """Raised for malformed trees or inputs outside a tree's alphabet."""


@dataclass(frozen=True)
class Alphabet:
    """``Alphabet(n)`` has letters ``0..n-1``; ``Alphabet(None)`` is all naturals."""

    size: Optional[int] = None

    def __post_init__(self):
        if self.size is not None and self.size < 1:
            raise TreeError(f"finite alphabet needs a positive size, got {self.size}")

    @classmethod
    def omega(cls) -> "Alphabet":
        return cls(None)

    @classmethod
    def finite(cls, n: int) -> "Alphabet":
        return cls(n)

    @property
    def is_omega(self) -> bool:
        return self.size is None

    def contains(self, letter) -> bool:
        if not isinstance(letter, int) or isinstance(letter, bool) or letter < 0:
            return False
        return self.size is None or letter < self.size

    def __str__(self) -> str:
        return "omega" if self.size is None else f"finite {self.size}"


@dataclass(frozen=True)
class ChildSpec:
    """Symbolic set of letters: a finite set, every letter, or every letter above ``bound``."""

    kind: str
    letters: tuple = ()
    bound: int = -1

    def __post_init__(self):
        if self.kind == "set":
            if not self.letters:
                raise TreeError("a letter set must be non-empty")
            if any(not isinstance(x, int) or x < 0 for x in self.letters):
                raise TreeError(f"letters must be naturals: {self.letters}")
            object.__setattr__(self, "letters", tuple(sorted(set(self.letters))))
        elif self.kind == "above":
            if self.bound < 0:
                raise TreeError(f"above() needs a natural bound, got {self.bound}")
        elif self.kind != "all":
            raise TreeError(f"unknown child spec kind {self.kind!r}")

    @classmethod
    def of(cls, *letters: int) -> "ChildSpec":
        return cls("set", tuple(letters))

    @classmethod
    def every(cls) -> "ChildSpec":
        return cls("all")

    @classmethod
    def above(cls, k: int) -> "ChildSpec":
        return cls("above", bound=k)

    def contains(self, letter: int) -> bool:
        if self.kind == "set":
            return letter in self.letters
        if self.kind == "all":
            return True
        return letter > self.bound

    def is_finite(self, alphabet: Alphabet) -> bool:
        """True when the spec denotes finitely many letters of ``alphabet``."""
        return self.kind == "set" or not alphabet.is_omega

    def min_letter(self) -> int:
        if self.kind == "set":
            return self.letters[0]
        return 0 if self.kind == "all" else self.bound + 1

    def max_letter(self, alphabet: Alphabet) -> int:
        if self.kind == "set":
            return self.letters[-1]
        if alphabet.is_omega:
            raise TreeError(f"{self} has no largest letter over omega")
        return alphabet.size - 1

    def iter_letters(self, alphabet: Alphabet, cap: Optional[int] = None) -> Iterator[int]:
        """Ascending letters of the spec inside ``alphabet``, stopping after ``cap``."""
        if self.kind == "set":
            for x in self.letters:
                if cap is not None and x > cap:
                    return
                yield x
            return
        top = None if alphabet.is_omega else alphabet.size - 1
        if cap is not None:
            top = cap if top is None else min(top, cap)
        if top is None:
            raise TreeError(f"{self} is infinite; a letter cap is required")
        yield from range(self.min_letter(), top + 1)

    def overlaps(self, other: "ChildSpec") -> bool:
        if self.kind == "set" and other.kind == "set":
            return not set(self.letters).isdisjoint(other.letters)
        if self.kind == "set":
            return any(other.contains(x) for x in self.letters)
        if other.kind == "set":
            return any(self.contains(x) for x in other.letters)
        return True

    def __str__(self) -> str:
        if self.kind == "set":
            return "set{" + ",".join(map(str, self.letters)) + "}"
        if self.kind == "all":
            return "all"
        return f"above({self.bound})"


Edges = Mapping[State, tuple]


def state_sort_key(state) -> tuple:
    """Deterministic order on state ids of mixed int/str type."""
    if isinstance(state, int):
        return (0, state, "")
    return (1, 0, str(state))


def _prune(alphabet: Alphabet, start, edges: Mapping, keep=None) -> tuple:
    """Drop states outside ``keep``, then dead and unreachable states."""
    alive = set(edges) if keep is None else set(keep) & set(edges)
    while True:
        doomed = {q for q in alive if not any(t in alive for _, t in edges[q])}
        if not doomed:
            break
        alive -= doomed
    if start not in alive:
        return None, {}
    reach = {start}
    todo = [start]
    while todo:
        q = todo.pop()
        for _, t in edges[q]:
            if t in alive and t not in reach:
                reach.add(t)
                todo.append(t)
    new = {q: tuple((s, t) for s, t in edges[q] if t in reach) for q in reach}
    return start, new


@dataclass(frozen=True, eq=True)
class RegularTree:
    """Canonical finite-state pruned tree.

    ``edges`` maps each state to ``(ChildSpec, target)`` pairs.  The
    constructor rejects non-canonical input; use :meth:`pruned` to build a
    tree from raw edges that may contain dead or unreachable states.  The
    tree with no states is the empty tree (the empty closed set).
    """

    alphabet: Alphabet
    start: Optional[State]
    edges: Edges = field(default_factory=dict)

    def __post_init__(self):
        edges = {q: tuple(sorted(((s, t) for s, t in out), key=lambda e: e[0].min_letter()))
                 for q, out in dict(self.edges).items()}
        object.__setattr__(self, "edges", edges)
        if self.start is None:
            if edges:
                raise TreeError("a tree without start state must have no states")
            return
        if self.start not in edges:
            raise TreeError(f"start state {self.start!r} has no edge list")
        for q, out in edges.items():
            if not out:
                raise TreeError(f"state {q!r} has no outgoing edge (dead states are not allowed)")
            for i, (spec, t) in enumerate(out):
                if not isinstance(spec, ChildSpec):
                    raise TreeError(f"edge label {spec!r} out of {q!r} is not a ChildSpec")
                if t not in edges:
                    raise TreeError(f"edge {q!r} -> {t!r} targets an unknown state")
                if spec.kind == "above" and not self.alphabet.is_omega:
                    raise TreeError(f"{spec} is only allowed over omega")
                if spec.kind == "set" and not all(self.alphabet.contains(x) for x in spec.letters):
                    raise TreeError(f"{spec} out of {q!r} leaves the alphabet {self.alphabet}")
                for other, _ in out[:i]:
                    if spec.overlaps(other):
                        raise TreeError(f"specs {other} and {spec} out of {q!r} overlap")
        seen = {self.start}
        todo = [self.start]
        while todo:
            for _, t in edges[todo.pop()]:
                if t not in seen:
                    seen.add(t)
                    todo.append(t)
        if seen != set(edges):
            missing = sorted(set(edges) - seen, key=state_sort_key)
            raise TreeError(f"states {missing} are unreachable from the start state")

    @classmethod
    def pruned(cls, alphabet: Alphabet, start, edges: Mapping) -> "RegularTree":
        """Canonical tree for raw edges: dead and unreachable states are removed."""
        raw = {q: tuple(out) for q, out in edges.items()}
        for out in list(raw.values()):
            for _, t in out:
                raw.setdefault(t, ())
        if start is not None and start not in raw:
            raise TreeError(f"start state {start!r} has no edge list")
        if start is None:
            return cls(alphabet, None, {})
        s, new = _prune(alphabet, start, raw)
        return cls(alphabet, s, new)

    @classmethod
    def empty(cls, alphabet: Alphabet = Alphabet.omega()) -> "RegularTree":
        return cls(alphabet, None, {})

    @property
    def states(self) -> frozenset:
        return frozenset(self.edges)

    @property
    def is_empty(self) -> bool:
        return self.start is None

    def sorted_states(self) -> list:
        return sorted(self.edges, key=state_sort_key)

    def step(self, state, letter: int):
        """Target of ``letter`` from ``state`` or None when the letter is not routed."""
        for spec, t in self.edges[state]:
            if spec.contains(letter):
                return t
        return None

    def state_at(self, word: Sequence[int]):
        """State reached by reading ``word`` from the root, or None if ``word`` is not a node."""
        q = self.start
        if q is None:
            return None
        for x in word:
            if not self.alphabet.contains(x):
                raise TreeError(f"letter {x!r} is not in the alphabet {self.alphabet}")
            q = self.step(q, x)
            if q is None:
                return None
        return q

    def contains_prefix(self, word: Sequence[int]) -> bool:
        return self.state_at(word) is not None

    def is_finitely_branching(self) -> bool:
        return all(spec.is_finite(self.alphabet) for out in self.edges.values() for spec, _ in out)

    def infinite_states(self) -> frozenset:
        """States with an edge carrying infinitely many letters."""
        return frozenset(q for q, out in self.edges.items()
                         if any(not s.is_finite(self.alphabet) for s, _ in out))

    def compact_bound_prefix(self, depth: int) -> tuple:
        """``f(n)`` = largest letter ``m`` with ``u + (m,)`` a node for some node ``u`` of length ``n``."""
        if not self.is_finitely_branching():
            raise TreeError("compact_bound_prefix needs a finitely branching tree")
        out = []
        level = {self.start} if self.start is not None else set()
        for _ in range(depth):
            if not level:
                out.append(0)
                continue
            out.append(max(spec.max_letter(self.alphabet) for q in level for spec, _ in self.edges[q]))
            level = {t for q in level for _, t in self.edges[q]}
        return tuple(out)

    def restrict_to_states(self, keep: Iterable) -> "RegularTree":
        """Canonical tree on the states in ``keep``; edges into other states are dropped."""
        if self.start is None:
            return self
        s, new = _prune(self.alphabet, self.start, self.edges, keep=set(keep))
        return RegularTree(self.alphabet, s, new)

    def subtree(self, state) -> "RegularTree":
        """The tree read from ``state`` instead of the start state."""
        return RegularTree.pruned(self.alphabet, state, self.edges)

    def reachable_from(self, state) -> frozenset:
        seen = {state}
        todo = [state]
        while todo:
            for _, t in self.edges[todo.pop()]:
                if t not in seen:
                    seen.add(t)
                    todo.append(t)
        return frozenset(seen)

    def children(self, word: Sequence[int], cap: Optional[int] = None) -> list:
        """Letters ``x`` with ``word + (x,)`` a node, ascending, at most ``cap``."""
        q = self.state_at(word)
        if q is None:
            return []
        return sorted(x for spec, _ in self.edges[q] for x in spec.iter_letters(self.alphabet, cap))

    def enumerate_nodes(self, depth: int, cap: Optional[int] = None) -> list:
        """All nodes of length at most ``depth`` in length-then-lexicographic order.

        Letters above ``cap`` are skipped; without a cap an infinite spec met
        during the walk is an error.
        """
        if self.start is None:
            return []
        out = [()]
        level = [((), self.start)]
        for _ in range(depth):
            nxt = []
            for word, q in level:
                kids = []
                for spec, t in self.edges[q]:
                    if cap is None and not spec.is_finite(self.alphabet):
                        raise TreeError(f"node {word} has infinitely many children; pass a letter cap")
                    kids.extend((x, t) for x in spec.iter_letters(self.alphabet, cap))
                kids.sort()
                nxt.extend((word + (x,), t) for x, t in kids)
            level = nxt
            out.extend(w for w, _ in level)
        return out

    def shortest_words(self) -> dict:
        """For every state the length-then-lex least word leading to it."""
        if self.start is None:
            return {}
        best = {}
        heap = [((), 0, self.start)]
        tick = 1
        while heap:
            word, _, q = heapq.heappop(heap)
            if q in best:
                continue
            best[q] = word
            for spec, t in self.edges[q]:
                if t not in best:
                    heapq.heappush(heap, (word + (spec.min_letter(),), tick, t))
                    tick += 1
        return best

    def relabel(self) -> "RegularTree":
        """Same tree with states renamed 0..n-1 in order of first visit."""
        if self.start is None:
            return self
        names = {self.start: 0}
        order = [self.start]
        for q in order:
            for _, t in self.edges[q]:
                if t not in names:
                    names[t] = len(names)
                    order.append(t)
        return RegularTree(self.alphabet, 0,
                           {names[q]: tuple((s, names[t]) for s, t in self.edges[q]) for q in order})

    def __repr__(self) -> str:
        return f"RegularTree({self.alphabet}, states={len(self.edges)})"


def is_prefix(u: Sequence, v: Sequence) -> bool:
    """``u`` is an initial segment of ``v`` (possibly equal)."""
    return len(u) <= len(v) and tuple(v[:len(u)]) == tuple(u)


def compatible(u: Sequence, v: Sequence) -> bool:
    return is_prefix(u, v) or is_prefix(v, u)


def shortlex_key(word: Sequence) -> tuple:
    return (len(word), tuple(word))


def words(letters: Sequence[int], max_len: int, min_len: int = 0) -> Iterator[tuple]:
    """All words over ``letters`` with length in ``[min_len, max_len]``, shortlex order."""
    level = [()]
    for n in range(max_len + 1):
        if n >= min_len:
            yield from level
        if n < max_len:
            level = [w + (x,) for w in level for x in letters]


# --- small catalogue of trees used throughout examples and tests ---

def full_tree(alphabet: Alphabet = Alphabet.omega()) -> RegularTree:
    return RegularTree(alphabet, 0, {0: ((ChildSpec.every(), 0),)})


def full_kary(k: int) -> RegularTree:
    """All sequences over ``0..k-1``, as a tree over omega."""
    return RegularTree(Alphabet.omega(), 0, {0: ((ChildSpec.of(*range(k)), 0),)})


def constant_branch(letter: int = 0, alphabet: Alphabet = Alphabet.omega()) -> RegularTree:
    """The single branch ``letter letter letter ...``."""
    return RegularTree(alphabet, 0, {0: ((ChildSpec.of(letter), 0),)})


def word_then(prefix: Sequence[int], tail: RegularTree) -> RegularTree:
    """Tree of sequences ``prefix + f`` with ``f`` a branch of ``tail``."""
    if tail.is_empty:
        return tail
    t = tail.relabel()
    n = len(prefix)
    edges = {("p", i): ((ChildSpec.of(prefix[i]), ("p", i + 1) if i + 1 < n else ("t", 0)),)
             for i in range(n)}
    edges.update({("t", q): tuple((s, ("t", r)) for s, r in out) for q, out in t.edges.items()})
    return RegularTree(tail.alphabet, ("p", 0) if n else ("t", 0), edges).relabel()


def two_branch() -> RegularTree:
    """Root splits: after 0 everything is allowed, after 1 only further 1s."""
    return RegularTree(Alphabet.omega(), "r", {
        "r": ((ChildSpec.of(0), "full"), (ChildSpec.of(1), "ones")),
        "full": ((ChildSpec.every(), "full"),),
        "ones": ((ChildSpec.of(1), "ones"),),
    })


def union(trees: Sequence[RegularTree]) -> RegularTree:
    """Tree whose branches are the branches of any of ``trees`` (subset construction)."""
    trees = [t for t in trees if not t.is_empty]
    if not trees:
        return RegularTree.empty()
    alphabet = trees[0].alphabet
    if any(t.alphabet != alphabet for t in trees):
        raise TreeError("union needs trees over one alphabet")
    start = tuple(t.start for t in trees)
    edges = {}
    todo = [start]
    while todo:
        qs = todo.pop()
        if qs in edges:
            continue
        specs = [s for t, q in zip(trees, qs) if q is not None for s, _ in t.edges[q]]
        infinite = [s for s in specs if not s.is_finite(alphabet)]
        if alphabet.is_omega:
            # letters above every named letter and bound behave alike
            top = max([s.letters[-1] for s in specs if s.kind == "set"] +
                      [s.bound for s in specs if s.kind == "above"], default=-1)
            finite_letters = range(top + 1)
        else:
            finite_letters = range(alphabet.size)
        groups: dict = {}
        for x in finite_letters:
            ts = tuple(t.step(q, x) if q is not None else None for t, q in zip(trees, qs))
            if any(r is not None for r in ts):
                groups.setdefault(ts, []).append(x)
        out = [(ChildSpec.of(*xs), ts) for ts, xs in groups.items()]
        if alphabet.is_omega and infinite:
            x = top + 1
            ts = tuple(t.step(q, x) if q is not None else None for t, q in zip(trees, qs))
            out.append((ChildSpec.above(top) if top >= 0 else ChildSpec.every(), ts))
        edges[qs] = tuple(out)
        todo.extend(ts for _, ts in out)
    return RegularTree.pruned(alphabet, start, edges).relabel()
