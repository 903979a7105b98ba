"""Smallness checks on regular trees, with certificates.

* relative nowhere density and meagerness with respect to a condition set,
* superperfect trees, the derivative and the Cantor-Bendixson decomposition,
* sigma-boundedness and the diagonal escape from countably many bounds.
"""

from __future__ import annotations

import heapq
from dataclasses import dataclass, field
from typing import Optional, Sequence

from .conditions import ConditionSet, ConditionSetError, ExtendsWord, FirstLetterAbove, FirstLetterIs
from .tree import RegularTree, TreeError, state_sort_key, word_then

DEFAULT_BUDGET = {"node_depth": 4, "cond_limit": 8, "ext_depth": 3, "letter_cap": 8}


def _budget(budget: Optional[dict]) -> dict:
    out = dict(DEFAULT_BUDGET)
    out.update(budget or {})
    return out


@dataclass
class NowhereDenseWitness:
    """For every node ``u`` a condition refuted by every continuation of ``u`` inside the tree.

    Exact witnesses depend only on the automaton state of the node and are
    stored per state; bounded witnesses are stored per checked node.
    """

    tree: RegularTree
    cs_name: str
    exact: bool
    per_state: dict = field(default_factory=dict)
    per_node: dict = field(default_factory=dict)
    budget: dict = field(default_factory=dict)

    def condition_at(self, u: Sequence[int]):
        u = tuple(u)
        if self.exact:
            q = self.tree.state_at(u)
            return None if q is None else self.per_state[q]
        return self.per_node.get(u)

    def to_json(self) -> dict:
        def enc(b):
            return list(b) if isinstance(b, tuple) else b
        if self.exact:
            body = {str(q): enc(self.per_state[q]) for q in self.tree.sorted_states()}
            return {"kind": "nowhere_dense", "cs": self.cs_name, "mode": "exact", "per_state": body}
        body = [{"node": list(u), "condition": enc(b)} for u, b in sorted(self.per_node.items())]
        return {"kind": "nowhere_dense", "cs": self.cs_name, "mode": "bounded",
                "budget": self.budget, "per_node": body}


def _uncovered_letter(tree: RegularTree, state) -> Optional[int]:
    """Least letter with no edge out of ``state``, or None if every letter is routed."""
    specs = [s for s, _ in tree.edges[state]]
    if tree.alphabet.is_omega:
        if any(s.kind == "all" for s in specs):
            return None
        aboves = [s.bound + 1 for s in specs if s.kind == "above"]
        top = min(aboves) if aboves else max(s.letters[-1] for s in specs) + 2
        candidates = range(top)
    else:
        candidates = range(tree.alphabet.size)
    for x in candidates:
        if not any(s.contains(x) for s in specs):
            return x
    return None


def _missing_word(tree: RegularTree, state) -> Optional[tuple]:
    """Shortest (then least) non-empty word not readable from ``state``."""
    heap = [((), 0, state)]
    seen = set()
    tick = 1
    while heap:
        word, _, q = heapq.heappop(heap)
        if q in seen:
            continue
        seen.add(q)
        x = _uncovered_letter(tree, q)
        if x is not None:
            return word + (x,)
        for spec, t in tree.edges[q]:
            if t not in seen:
                heapq.heappush(heap, (word + (spec.min_letter(),), tick, t))
                tick += 1
    return None


def _exact_state_witness(tree: RegularTree, cs: ConditionSet, q):
    kids = [s for s, _ in tree.edges[q]]
    if isinstance(cs, FirstLetterIs):
        has0 = any(s.contains(0) for s in kids)
        has1 = any(s.contains(1) for s in kids)
        if not has1:
            return 1
        return 0 if not has0 else None
    if isinstance(cs, FirstLetterAbove):
        if not all(s.is_finite(tree.alphabet) for s in kids):
            return None
        return max(s.max_letter(tree.alphabet) for s in kids)
    if isinstance(cs, ExtendsWord):
        return _missing_word(tree, q)
    raise ConditionSetError(f"no exact nowhere-density checker for {cs.name}")


def is_b_nowhere_dense(tree: RegularTree, cs: ConditionSet, mode: str = "exact",
                       budget: Optional[dict] = None) -> Optional[NowhereDenseWitness]:
    """Witness that ``[tree]`` is nowhere dense relative to ``cs``, or None.

    ``mode="exact"`` decides the question for the three canonical condition
    sets.  ``mode="bounded"`` searches, for every node up to
    ``budget["node_depth"]``, the first ``cond_limit`` conditions for one that
    no continuation of length at most ``ext_depth`` (letters at most
    ``letter_cap``) satisfies; None then means "not certified".
    """
    if mode == "exact":
        if cs.bounded_only or not isinstance(cs, (FirstLetterIs, FirstLetterAbove, ExtendsWord)):
            raise ConditionSetError(f"condition set {cs.name} only supports bounded checking")
        per_state = {}
        for q in tree.sorted_states():
            b = _exact_state_witness(tree, cs, q)
            if b is None:
                return None
            per_state[q] = b
        return NowhereDenseWitness(tree, cs.name, True, per_state=per_state)
    if mode != "bounded":
        raise ValueError(f"mode must be 'exact' or 'bounded', not {mode!r}")
    b = _budget(budget)
    per_node = bounded_witnesses(tree, cs, b)
    if per_node is None:
        return None
    return NowhereDenseWitness(tree, cs.name, False, per_node=per_node, budget=b)


def _continuations(tree: RegularTree, state, depth: int, cap: int) -> list:
    sub = RegularTree.pruned(tree.alphabet, state, tree.edges)
    return sub.enumerate_nodes(depth, cap)[1:]


def bounded_witnesses(tree: RegularTree, cs: ConditionSet, budget: dict, max_total: Optional[int] = None):
    """Per-node witness map for the bounded check, or None if some node has none."""
    conds = cs.enumerate(budget["cond_limit"])
    cap = budget["letter_cap"]
    cache = {}
    out = {}
    for u in tree.enumerate_nodes(budget["node_depth"], cap):
        depth = budget["ext_depth"]
        if max_total is not None:
            depth = min(depth, max_total - len(u))
        q = tree.state_at(u)
        key = (q, depth)
        if key not in cache:
            exts = _continuations(tree, q, depth, cap)
            cache[key] = next((b for b in conds if not any(cs.satisfies_all(exts, b))), None)
        if cache[key] is None:
            return None
        out[u] = cache[key]
    return out


def check_witnesses(tree: RegularTree, cs: ConditionSet, witness, budget: dict,
                    max_total: Optional[int] = None) -> list:
    """Nodes (up to ``node_depth``) whose given witness is satisfied by some continuation.

    ``witness`` maps a node to its condition (a dict or a callable).
    """
    lookup = witness if callable(witness) else witness.get
    cap = budget["letter_cap"]
    bad = []
    for u in tree.enumerate_nodes(budget["node_depth"], cap):
        depth = budget["ext_depth"]
        if max_total is not None:
            depth = min(depth, max_total - len(u))
        b = lookup(u)
        exts = _continuations(tree, tree.state_at(u), depth, cap)
        if b is None or any(cs.satisfies_all(exts, b)):
            bad.append(u)
    return bad


@dataclass
class MeagerCover:
    ok: bool
    pieces: list
    witnesses: list
    failure: Optional[str] = None

    def __bool__(self) -> bool:
        return self.ok

    def to_json(self) -> dict:
        return {"kind": "meager_cover", "ok": self.ok, "failure": self.failure,
                "witnesses": [w.to_json() if w is not None else None for w in self.witnesses]}


def verify_b_meager_cover(target: RegularTree, pieces: Sequence[RegularTree], cs: ConditionSet,
                          budget: Optional[dict] = None, mode: str = "exact") -> MeagerCover:
    """Check that every piece is nowhere dense and that the pieces cover ``target``.

    In exact mode coverage is decided on the product automaton; in bounded
    mode it is checked node by node up to ``node_depth`` with letters at most
    ``letter_cap``.  A finite union of closed sets is closed, so node coverage
    of the target tree is exactly coverage of its closed set.
    """
    b = _budget(budget)
    if cs.bounded_only:
        mode = "bounded"
    witnesses = []
    for i, piece in enumerate(pieces):
        w = is_b_nowhere_dense(piece, cs, mode, b)
        witnesses.append(w)
        if w is None:
            return MeagerCover(False, list(pieces), witnesses, f"piece {i} is not certified nowhere dense")
    if mode == "exact":
        gap = uncovered_node(target, pieces)
        if gap is not None:
            return MeagerCover(False, list(pieces), witnesses, f"node {gap} lies in no piece")
        return MeagerCover(True, list(pieces), witnesses)
    for u in target.enumerate_nodes(b["node_depth"], b["letter_cap"]):
        if not any(p.contains_prefix(u) for p in pieces):
            return MeagerCover(False, list(pieces), witnesses, f"node {u} lies in no piece")
    return MeagerCover(True, list(pieces), witnesses)


def letter_classes(specs, alphabet) -> list:
    """One letter from each class of letters that every spec in ``specs`` treats alike."""
    if not alphabet.is_omega:
        return list(range(alphabet.size))
    named = sorted({x for s in specs if s.kind == "set" for x in s.letters})
    cuts = sorted({0} | {s.bound + 1 for s in specs if s.kind == "above"})
    reps = set(named)
    taken = set(named)
    for i, lo in enumerate(cuts):
        hi = cuts[i + 1] if i + 1 < len(cuts) else None
        x = lo
        while x in taken:
            x += 1
        if hi is None or x < hi:
            reps.add(x)
    return sorted(reps)


def uncovered_node(target: RegularTree, pieces: Sequence[RegularTree]) -> Optional[tuple]:
    """Shortest (then least) node of ``target`` outside every piece, or None.

    Runs the product of the automata, so the answer is exact at every depth.
    """
    if target.is_empty:
        return None
    if not pieces:
        return ()
    start = (target.start, tuple(p.start for p in pieces))
    if all(q is None for q in start[1]):
        return ()
    seen = {start}
    level = [((), start)]
    while level:
        nxt = []
        for word, (q, ps) in level:
            specs = [s for s, _ in target.edges[q]]
            for p, pq in zip(pieces, ps):
                if pq is not None:
                    specs.extend(s for s, _ in p.edges[pq])
            for x in letter_classes(specs, target.alphabet):
                t = target.step(q, x)
                if t is None:
                    continue
                tps = tuple(p.step(pq, x) if pq is not None else None for p, pq in zip(pieces, ps))
                if all(r is None for r in tps):
                    return word + (x,)
                if (t, tps) not in seen:
                    seen.add((t, tps))
                    nxt.append((word + (x,), (t, tps)))
        level = nxt
    return None


# --- superperfect trees and the derivative ---

def _reaches_infinite(tree: RegularTree) -> frozenset:
    """States from which a state with an infinite edge is reachable (itself included)."""
    good = set(tree.infinite_states())
    changed = True
    while changed:
        changed = False
        for q, out in tree.edges.items():
            if q not in good and any(t in good for _, t in out):
                good.add(q)
                changed = True
    return frozenset(good)


def is_superperfect(tree: RegularTree) -> bool:
    """Every node has an extension with infinitely many children (the empty tree qualifies)."""
    return _reaches_infinite(tree) == tree.states


def derivative(tree: RegularTree) -> RegularTree:
    """Remove the nodes without an infinitely branching extension, then prune."""
    return tree.restrict_to_states(_reaches_infinite(tree))


@dataclass
class RemovedPiece:
    """Branches removed at ``iteration`` through ``state`` of the pre-iteration tree.

    ``tree`` is the compact set of branches extending ``anchor``, the least
    word reaching ``state``; ``shape`` is the same set read from ``state``.
    Every other node reaching ``state`` carries a translate of ``shape``, so
    the piece stands for countably many compact sets.
    """

    iteration: int
    state: object
    anchor: tuple
    tree: RegularTree
    shape: RegularTree
    source: RegularTree

    def owns(self, u: Sequence[int]) -> bool:
        """``u`` passes through ``state`` of the pre-iteration tree."""
        q = self.source.start
        if q == self.state:
            return True
        for x in u:
            q = self.source.step(q, x)
            if q is None:
                return False
            if q == self.state:
                return True
        return False


@dataclass
class KernelTrace:
    """States removed by each derivative step; ``transit`` lists those without a piece."""

    removed: list = field(default_factory=list)
    transit: list = field(default_factory=list)

    @property
    def iterations(self) -> int:
        return len(self.removed)

    def to_json(self) -> dict:
        def enc(states):
            return [str(q) for q in sorted(states, key=state_sort_key)]
        rows = [{"iteration": i, "removed": enc(r), "transit": enc(t)}
                for i, (r, t) in enumerate(zip(self.removed, self.transit))]
        return {"iterations": self.iterations, "table": rows, "limit_stages": 0}


def cantor_bendixson(tree: RegularTree):
    """Split ``tree`` into its superperfect kernel and removed compact pieces.

    The derivative is applied until the result is superperfect; a regular
    tree gets there in at most as many steps as it has states, so no limit
    stage is ever needed.  States dropped because they reach no infinitely
    branching node yield pieces.  States dropped only by pruning ("transit")
    do not: each branch through them later enters a piece state.

    Returns ``(kernel, pieces, trace)``.
    """
    current = tree
    pieces = []
    trace = KernelTrace()
    if tree.is_empty:
        return tree, pieces, trace
    iteration = 0
    while True:
        nxt = derivative(current)
        removed = current.states - nxt.states
        reach = _reaches_infinite(current)
        trace.removed.append(frozenset(removed))
        trace.transit.append(frozenset(removed & reach))
        anchors = current.shortest_words()
        for q in sorted(removed - reach, key=state_sort_key):
            shape = current.subtree(q)
            anchored = word_then(anchors[q], shape)
            pieces.append(RemovedPiece(iteration, q, anchors[q], anchored, shape, current))
        current = nxt
        iteration += 1
        if is_superperfect(current):
            return current, pieces, trace


def is_sigma_bounded(tree: RegularTree):
    """``(True, pieces)`` when the kernel is empty, else ``(False, pieces)``.

    The pieces are compact; together with their translates they cover the
    closed set of every tree whose kernel is empty.
    """
    kernel, pieces, _ = cantor_bendixson(tree)
    return kernel.is_empty, pieces


def escape_sigma_bound(u: Sequence[int], candidates: Sequence[Sequence[int]], out_len: int) -> tuple:
    """Extend ``u`` to length ``out_len`` escaping each candidate bound somewhere.

    Position ``len(u)`` exceeds ``f_i(len(u))`` for every candidate
    ``i <= len(u)``; a later position ``j`` exceeds ``f_j(j)``.  Positions with
    no candidate to beat hold 0.
    """
    u = tuple(u)
    n = len(u)
    if out_len <= n:
        raise ValueError(f"out_len {out_len} must exceed len(u) = {n}")
    for i, f in enumerate(candidates):
        if len(f) < out_len:
            raise ValueError(f"candidate {i} has length {len(f)} < out_len {out_len}")
    head = [f[n] + 1 for f in candidates[:n + 1]]
    g = list(u) + [max(head, default=0)]
    for j in range(n + 1, out_len):
        g.append(candidates[j][j] + 1 if j < len(candidates) else 0)
    return tuple(g)


def escape_position(u: Sequence[int], index: int) -> int:
    """Where the escape of candidate ``index`` happens."""
    return max(len(u), index)
