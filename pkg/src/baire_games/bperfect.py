"""Trees whose vertices are tuples of non-empty words, witnessing relative largeness.

A vertex ``(s0, ..., sn)`` stands for the concatenation ``s0 + ... + sn``.
Such a tree is perfect relative to a condition set when

(a) the child labels of every vertex are pairwise incompatible (no label is
    an initial segment of a sibling), and
(b) below the root, every condition is satisfiable by some extension of
    some child label.

Trees are stored as finite automata over label families, so a finitely
described tree may be infinite; an explicit finite tree is the special case
where every vertex is its own state.  Leaves may be marked *frontier*: they
are trusted to extend and end the stored part.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from itertools import combinations
from typing import Iterable, Mapping, Optional, Sequence

from .conditions import ConditionSet, Report, Violation
from .serialize import parse_spec
from .tree import Alphabet, ChildSpec, RegularTree, TreeError, compatible, is_prefix, words


@dataclass(frozen=True)
class LabelFamily:
    """Labels ``(x,) + rest`` for every letter ``x`` in ``first``."""

    first: ChildSpec
    rest: tuple = ()

    @classmethod
    def word(cls, label: Sequence[int]) -> "LabelFamily":
        label = tuple(label)
        if not label:
            raise TreeError("labels must be non-empty words")
        return cls(ChildSpec.of(label[0]), label[1:])

    @property
    def length(self) -> int:
        return 1 + len(self.rest)

    def contains(self, label: Sequence[int]) -> bool:
        return (len(label) == self.length and self.first.contains(label[0])
                and tuple(label[1:]) == self.rest)

    def labels(self, alphabet: Alphabet, cap: Optional[int] = None):
        for x in self.first.iter_letters(alphabet, cap):
            yield (x,) + self.rest

    def clashes_with(self, other: "LabelFamily") -> bool:
        """Some label here is comparable with some label of ``other``."""
        return self.first.overlaps(other.first) and compatible(self.rest, other.rest)

    def __str__(self) -> str:
        return f"{self.first}" + ("+" + ",".join(map(str, self.rest)) if self.rest else "")


class BPerfectTree:
    """Finite-state tree on words.

    ``children`` maps a state to ``(LabelFamily, target)`` pairs; states in
    ``frontier`` are trusted leaves.  A state with no children outside the
    frontier is a genuine dead end (and a validation error).
    """

    def __init__(self, alphabet: Alphabet, start, children: Mapping, frontier: Iterable = ()):
        self.alphabet = alphabet
        self.start = start
        self.children = {q: tuple(out) for q, out in children.items()}
        for out in list(self.children.values()):
            for _, t in out:
                self.children.setdefault(t, ())
        self.children.setdefault(start, ())
        self.frontier = frozenset(frontier)
        for q in self.frontier:
            if self.children.get(q):
                raise TreeError(f"frontier state {q!r} has stored children")

    @classmethod
    def explicit(cls, vertices: Mapping, frontier: Iterable = (),
                 alphabet: Alphabet = Alphabet.omega()) -> "BPerfectTree":
        """Tree given vertex by vertex: ``{vertex: [child labels]}``, vertices as tuples of words."""
        children = {}
        for v, labels in vertices.items():
            v = tuple(tuple(s) for s in v)
            children[v] = tuple((LabelFamily.word(s), v + (tuple(s),)) for s in labels)
        frontier = {tuple(tuple(s) for s in v) for v in frontier}
        return cls(alphabet, (), children, frontier)

    def states(self) -> list:
        seen = [self.start]
        known = {self.start}
        for q in seen:
            for _, t in self.children[q]:
                if t not in known:
                    known.add(t)
                    seen.append(t)
        return seen

    def is_frontier(self, state) -> bool:
        return state in self.frontier

    def labels_at(self, state, cap: Optional[int] = None) -> list:
        """Concrete ``(label, target)`` pairs at ``state`` in length-then-lex order."""
        out = [(lab, t) for fam, t in self.children[state] for lab in fam.labels(self.alphabet, cap)]
        out.sort(key=lambda e: (len(e[0]), e[0]))
        return out

    def step(self, state, label: Sequence[int]):
        for fam, t in self.children[state]:
            if fam.contains(label):
                return t
        return None

    def locate(self, vertex: Sequence[Sequence[int]]):
        """State of a vertex, or None if it is not stored."""
        q = self.start
        for label in vertex:
            q = self.step(q, tuple(label))
            if q is None:
                return None
        return q

    def vertices(self, depth: int, cap: Optional[int] = None) -> list:
        """Stored vertices up to ``depth`` labels (first letters at most ``cap``)."""
        out = [()]
        level = [((), self.start)]
        for _ in range(depth):
            level = [(v + (lab,), t) for v, q in level for lab, t in self.labels_at(q, cap)]
            out.extend(v for v, _ in level)
        return out

    def relabel(self) -> "BPerfectTree":
        names = {q: i for i, q in enumerate(self.states())}
        children = {names[q]: tuple((f, names[t]) for f, t in self.children[q]) for q in names}
        return BPerfectTree(self.alphabet, 0, children, {names[q] for q in self.frontier if q in names})

    def to_json(self) -> dict:
        t = self.relabel()
        states = []
        for q in sorted(t.children):
            states.append({"id": q, "frontier": q in t.frontier,
                           "children": [{"first": str(f.first), "rest": list(f.rest), "target": d}
                                        for f, d in t.children[q]]})
        return {"alphabet": str(self.alphabet), "start": 0, "states": states}

    @classmethod
    def from_json(cls, data) -> "BPerfectTree":
        if isinstance(data, str):
            data = json.loads(data)
        try:
            alpha = data.get("alphabet", "omega")
            alphabet = Alphabet.omega() if alpha == "omega" else Alphabet.finite(int(str(alpha).split()[-1]))
            children, frontier = {}, set()
            for st in data["states"]:
                children[st["id"]] = tuple(
                    (LabelFamily(parse_spec(c["first"]), tuple(c.get("rest", ()))), c["target"])
                    for c in st.get("children", ()))
                if st.get("frontier"):
                    frontier.add(st["id"])
            return cls(alphabet, data.get("start", 0), children, frontier)
        except (KeyError, TypeError, ValueError) as exc:
            raise TreeError(f"malformed B-perfect tree: {exc}") from exc

    def __repr__(self) -> str:
        return f"BPerfectTree(states={len(self.children)}, frontier={len(self.frontier)})"


DEFAULT_BUDGET = {"cond_limit": 8, "ext_depth": 3, "letter_cap": 8}


def validate_bperfect(tree: BPerfectTree, cs: ConditionSet, budget: Optional[dict] = None) -> Report:
    """Check incompatibility everywhere and density below the root within ``budget``.

    Density of a state means: for each of the first ``cond_limit`` conditions
    some child label (first letter at most ``letter_cap``) has an extension by
    at most ``ext_depth`` letters (each at most ``letter_cap``) satisfying it.
    Non-frontier states without children are reported as dead ends.
    """
    b = dict(DEFAULT_BUDGET)
    b.update(budget or {})
    report = Report(budget=b)
    conds = cs.enumerate(b["cond_limit"])
    cap = b["letter_cap"]
    tails = list(words(range(cap + 1), b["ext_depth"]))
    states = tree.states()
    below_root = {t for q in states for _, t in tree.children[q]}
    report.notes["frontier_size"] = sum(1 for q in states if tree.is_frontier(q))
    report.notes["states"] = len(states)
    for q in states:
        if tree.is_frontier(q):
            continue
        fams = tree.children[q]
        if not fams:
            report.violations.append(Violation("childless", {"state": q}))
            continue
        for (f1, _), (f2, _) in combinations(fams, 2):
            if f1.clashes_with(f2):
                report.violations.append(Violation("compatible_siblings", {"state": q, "a": str(f1), "b": str(f2)}))
        if q not in below_root:
            continue
        ext = [lab + w for lab, _ in tree.labels_at(q, cap) for w in tails]
        for c in conds:
            if not any(cs.satisfies_all(ext, c)):
                report.violations.append(Violation("not_dense", {"state": q, "b": c}))
    return report


def bperfect_prefix_member(tree: BPerfectTree, u: Sequence[int]):
    """Whether ``u`` lies on a path of the tree, with the labels it passes completely.

    Returns ``(member, segmentation)``.  Incompatible siblings make the
    segmentation unique.  A frontier vertex accepts every continuation.
    """
    u = tuple(u)
    q = tree.start
    pos = 0
    seg = []
    while pos < len(u):
        if tree.is_frontier(q):
            return True, tuple(seg)
        rest = u[pos:]
        moved = False
        for fam, t in tree.children[q]:
            if not fam.first.contains(rest[0]):
                continue
            label = (rest[0],) + fam.rest
            if is_prefix(label, rest):
                seg.append(label)
                pos += len(label)
                q = t
                moved = True
                break
            if is_prefix(rest, label):
                return True, tuple(seg)
        if not moved:
            return False, tuple(seg)
    return True, tuple(seg)


def body_tree(tree: BPerfectTree) -> RegularTree:
    """Regular tree of the closure of the branches of ``tree``.

    Frontier vertices continue with every letter.  Label families at one
    state must either be finite or have first-letter sets disjoint from all
    other families there.
    """
    alphabet = tree.alphabet
    edges: dict = {("full",): ((ChildSpec.every(), ("full",)),)}

    def chain(node, letters, target):
        """Edges reading ``letters`` from ``node`` and ending at ``target``."""
        cur = node
        for i, x in enumerate(letters):
            nxt = target if i == len(letters) - 1 else node + (tuple(letters[:i + 1]),)
            edges.setdefault(cur, [])
            edges[cur] = list(edges[cur]) + [(ChildSpec.of(x), nxt)]
            cur = nxt

    for q in tree.states():
        root = ("j", q)
        if tree.is_frontier(q):
            edges[root] = ((ChildSpec.every(), ("full",)),)
            continue
        edges.setdefault(root, [])
        fams = tree.children[q]
        finite = [(f, t) for f, t in fams if f.first.is_finite(alphabet)]
        infinite = [(f, t) for f, t in fams if not f.first.is_finite(alphabet)]
        for f, t in infinite:
            if any(f.first.overlaps(g.first) for g, _ in fams if g is not f):
                raise TreeError(f"infinite label family {f} shares first letters with a sibling")
            if f.rest:
                mid = ("m", q, str(f))
                edges[root] = list(edges[root]) + [(f.first, mid)]
                chain(mid, f.rest, ("j", t))
            else:
                edges[root] = list(edges[root]) + [(f.first, ("j", t))]
        # concrete labels share a trie so that common prefixes route deterministically
        trie: dict = {}
        for f, t in finite:
            for lab in f.labels(alphabet):
                trie.setdefault(lab, t)
        prefixes = {lab[:i] for lab in trie for i in range(1, len(lab))}
        for lab, t in trie.items():
            if lab in prefixes:
                raise TreeError(f"label {lab} is a prefix of a sibling label")
        nodes = {(): root}
        for p in sorted(prefixes, key=len):
            nodes[p] = ("t", q, p)
        for lab, t in trie.items():
            nodes[lab] = ("j", t)
        grouped: dict = {}
        for w in list(prefixes) + list(trie):
            grouped.setdefault(w[:-1], set()).add(w[-1])
        for parent, letters in grouped.items():
            src = nodes[parent]
            out = list(edges.get(src, []))
            out.extend((ChildSpec.of(x), nodes[parent + (x,)]) for x in sorted(letters))
            edges[src] = out
    return RegularTree.pruned(alphabet, ("j", tree.start), edges).relabel()
