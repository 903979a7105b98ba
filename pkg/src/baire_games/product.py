"""Trees over pair letters ``(x, xi)`` used as payoffs of the witness game.

The first component ranges over an ordinary :class:`Alphabet`, the witness
component over all naturals.  An edge is labelled by a pair of child specs
and admits every pair whose components lie in the respective specs.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Mapping, Optional, Sequence

from .tree import Alphabet, ChildSpec, TreeError, _prune, state_sort_key

OMEGA = Alphabet.omega()


@dataclass(frozen=True)
class PairSpec:
    first: ChildSpec
    witness: ChildSpec

    def contains(self, pair) -> bool:
        x, xi = pair
        return self.first.contains(x) and self.witness.contains(xi)

    def overlaps(self, other: "PairSpec") -> bool:
        return self.first.overlaps(other.first) and self.witness.overlaps(other.witness)

    def min_pair(self) -> tuple:
        return (self.first.min_letter(), self.witness.min_letter())

    def __str__(self) -> str:
        return f"{self.first}*{self.witness}"


@dataclass(frozen=True, eq=True)
class ProductTree:
    """Canonical finite-state pruned tree whose letters are pairs ``(x, xi)``."""

    alphabet: Alphabet
    start: Optional[object]
    edges: Mapping = field(default_factory=dict)

    def __post_init__(self):
        edges = {q: tuple(sorted(out, key=lambda e: e[0].min_pair())) for q, out in dict(self.edges).items()}
        object.__setattr__(self, "edges", edges)
        if self.start is None:
            if edges:
                raise TreeError("a tree without start state must have no states")
            return
        if self.start not in edges:
            raise TreeError(f"start state {self.start!r} has no edge list")
        for q, out in edges.items():
            if not out:
                raise TreeError(f"state {q!r} has no outgoing edge")
            for i, (spec, t) in enumerate(out):
                if t not in edges:
                    raise TreeError(f"edge {q!r} -> {t!r} targets an unknown state")
                if spec.first.kind == "above" and not self.alphabet.is_omega:
                    raise TreeError(f"{spec.first} is only allowed over omega")
                for other, _ in out[:i]:
                    if spec.overlaps(other):
                        raise TreeError(f"pair specs {other} and {spec} out of {q!r} overlap")
        start, kept = _prune(self.alphabet, self.start, edges)
        if set(kept) != set(edges):
            raise TreeError("product tree has unreachable states")

    @classmethod
    def pruned(cls, alphabet: Alphabet, start, edges: Mapping) -> "ProductTree":
        raw = {q: tuple(out) for q, out in edges.items()}
        for out in list(raw.values()):
            for _, t in out:
                raw.setdefault(t, ())
        if start is None:
            return cls(alphabet, None, {})
        s, new = _prune(alphabet, start, raw)
        return cls(alphabet, s, new)

    @property
    def is_empty(self) -> bool:
        return self.start is None

    def sorted_states(self) -> list:
        return sorted(self.edges, key=state_sort_key)

    def step_pair(self, state, pair):
        for spec, t in self.edges[state]:
            if spec.contains(pair):
                return t
        return None

    def state_at(self, pairs: Sequence[tuple]):
        q = self.start
        if q is None:
            return None
        for pair in pairs:
            x, xi = pair
            if not self.alphabet.contains(x) or not OMEGA.contains(xi):
                raise TreeError(f"pair {pair!r} is outside the alphabet")
            for spec, t in self.edges[q]:
                if spec.contains(pair):
                    q = t
                    break
            else:
                return None
        return q

    def contains_prefix(self, pairs: Sequence[tuple]) -> bool:
        return self.state_at(pairs) is not None

    def enumerate_nodes(self, depth: int, cap: int) -> list:
        """Pair-sequence nodes up to ``depth`` with both components at most ``cap``."""
        if self.start is None:
            return []
        out = [()]
        level = [((), self.start)]
        for _ in range(depth):
            nxt = []
            for word, q in level:
                for spec, t in self.edges[q]:
                    for x in spec.first.iter_letters(self.alphabet, cap):
                        for xi in spec.witness.iter_letters(OMEGA, cap):
                            nxt.append((word + ((x, xi),), t))
            nxt.sort(key=lambda e: e[0])
            level = nxt
            out.extend(w for w, _ in level)
        return out

    def projection_nodes(self, depth: int, cap: int) -> set:
        """First components of all pair nodes up to ``depth`` (witness letters at most ``cap``)."""
        return {tuple(x for x, _ in w) for w in self.enumerate_nodes(depth, cap)}
