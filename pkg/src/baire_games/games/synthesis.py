"""Strategies from certificates and certificates from strategies.

* Player I wins from a B-perfect tree: each condition is met by walking the
  tree, reducing the condition whenever a child label only leads towards it.
* Player II wins from a cover by nowhere dense pieces: each round she names
  a witness condition of a piece that still contains the play, which forces
  the play out of that piece for good.
* Conversely a strategy for I is unfolded into a B-perfect tree, and a
  strategy for II into depth-truncated nowhere dense pieces.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Optional, Sequence

from ..bperfect import BPerfectTree, bperfect_prefix_member
from ..conditions import ConditionSet
from ..smallness import NowhereDenseWitness, check_witnesses, is_b_nowhere_dense
from ..tree import Alphabet, ChildSpec, RegularTree, compatible, is_prefix, words
from .engine import GameConfig, IMove, PlayHistory, Strategy, as_imove


class SynthesisFault(RuntimeError):
    """A synthesized strategy could not produce a legal move; the message says why."""


@dataclass
class Response:
    labels: list
    state: object
    reductions: int

    @property
    def move(self) -> tuple:
        return tuple(x for lab in self.labels for x in lab)


def bperfect_response(tree: BPerfectTree, cs: ConditionSet, state, b, letter_cap: int = 32) -> Response:
    """Answer condition ``b`` at vertex state ``state`` by descending through ``tree``.

    Take the first child label (length-then-lex) satisfying the current
    condition.  Otherwise take the first label that some extension would make
    satisfy it, replace the condition by its reduction past that label and
    continue one level down.  Ranks drop strictly, so at most ``rank(b)``
    reductions happen.
    """
    labels = []
    cond = b
    while True:
        if tree.is_frontier(state):
            raise SynthesisFault(f"tree exhausted at a frontier vertex while answering {b!r} "
                                 f"(after {len(labels)} labels); store it deeper")
        options = tree.labels_at(state, letter_cap)
        if not options:
            raise SynthesisFault(f"vertex state {state!r} has no children; condition {b!r} unanswerable")
        hit = next(((lab, t) for lab, t in options if cs.satisfies(lab, cond)), None)
        if hit is not None:
            labels.append(hit[0])
            return Response(labels, hit[1], len(labels) - 1)
        for lab, t in options:
            reduced = cs.reduce(cond, lab)
            if reduced is not None:
                if cs.rank(reduced) >= cs.rank(cond):
                    raise SynthesisFault(f"reduction of {cond!r} past {lab} did not lower the rank")
                labels.append(lab)
                state, cond = t, reduced
                break
        else:
            raise SynthesisFault(f"no child label of state {state!r} satisfies or leads to {cond!r} "
                                 f"(density fails within letter cap {letter_cap})")


def _vertex_state(tree: BPerfectTree, prefix: tuple):
    member, seg = bperfect_prefix_member(tree, prefix)
    if not member or sum(map(len, seg)) != len(prefix):
        raise SynthesisFault(f"play {prefix} does not end on a vertex of the tree")
    return tree.locate(seg)


def strategy_I_from_bperfect(tree: BPerfectTree, cs: ConditionSet, letter_cap: int = 32,
                             on_response: Optional[Callable] = None) -> Strategy:
    """Player I's strategy that keeps the play on a path of ``tree``.

    ``on_response(b, response)`` is called after each answer, e.g. to audit
    the number of reductions.
    """

    # vertex states of plays this strategy produced, so replies need not re-segment the play
    known: dict = {}

    def fn(h: PlayHistory):
        if h.round == 0:
            options = tree.labels_at(tree.start, letter_cap)
            if not options:
                raise SynthesisFault("the root has no children")
            known[options[0][0]] = options[0][1]
            return IMove(options[0][0])
        prefix = h.prefix
        state = known[prefix] if prefix in known else _vertex_state(tree, prefix)
        r = bperfect_response(tree, cs, state, h.moves[-1], letter_cap)
        if on_response is not None:
            on_response(h.moves[-1], r)
        if len(known) > 100_000:
            known.clear()
        known[prefix + r.move] = r.state
        return IMove(r.move)

    return Strategy("I", fn, "from-bperfect")


def strategy_II_from_cover(pieces: Sequence[RegularTree], cs: ConditionSet,
                           witnesses: Optional[Sequence] = None) -> Strategy:
    """Player II's strategy that plays a witness of the first piece still containing the play.

    ``witnesses`` aligns with ``pieces``; each entry is a
    :class:`NowhereDenseWitness`, a dict from nodes to conditions, or a
    callable.  Missing witnesses are computed with the exact checker.  Once
    the play has left every piece II repeats ``distinguisher(0)``.
    """
    pieces = list(pieces)
    if witnesses is None:
        witnesses = []
        for i, p in enumerate(pieces):
            w = is_b_nowhere_dense(p, cs, "exact")
            if w is None:
                raise SynthesisFault(f"piece {i} is not nowhere dense for {cs.name}")
            witnesses.append(w)
    lookups = []
    for w in witnesses:
        if isinstance(w, NowhereDenseWitness):
            lookups.append(w.condition_at)
        elif callable(w):
            lookups.append(w)
        else:
            lookups.append(lambda u, w=w: w.get(tuple(u)))
    filler = cs.distinguisher(0)

    def fn(h: PlayHistory):
        u = h.prefix
        for i, p in enumerate(pieces):
            if p.contains_prefix(u):
                b = lookups[i](u)
                if b is None:
                    raise SynthesisFault(f"no witness for piece {i} at node {u}")
                return b
        return filler

    return Strategy("II", fn, "from-cover")


def _word_of(move, witness_mode: bool, history: PlayHistory) -> tuple:
    m = as_imove(move, witness_mode)
    if m is None or not m.word:
        raise SynthesisFault(f"strategy returned an illegal move {move!r} after history {history.moves}")
    return m.word


def strategy_to_bperfect(strategy: Strategy, cs: ConditionSet, rounds: int = 3, cond_limit: int = 4,
                         witness_mode: bool = False) -> BPerfectTree:
    """Unfold I's replies to all condition sequences into an explicit B-perfect tree.

    At each vertex the replies to the first ``cond_limit`` conditions are
    collected one by one.  A reply incompatible with all kept labels is kept;
    one extending a kept label is dropped; one that is a proper initial
    segment of kept labels replaces them.  Kept labels are pairwise
    incompatible and each condition is met by an extension of a kept label.
    Vertices after ``rounds`` replies are frontier.
    """
    conds = cs.enumerate(cond_limit)
    h0 = PlayHistory()
    s0 = _word_of(strategy(h0), witness_mode, h0)
    vertices = {(): [s0]}
    frontier = []

    def expand(vertex, history, depth):
        if depth == rounds:
            frontier.append(vertex)
            return
        kept = []
        for b in conds:
            hb = history.then(b)
            move = strategy(hb)
            s = _word_of(move, witness_mode, hb)
            clash = [e for e in kept if compatible(e[0], s)]
            if not clash:
                kept.append((s, hb.then(as_imove(move, witness_mode))))
            elif any(is_prefix(e[0], s) for e in clash):
                continue
            else:
                kept = [e for e in kept if e not in clash] + [(s, hb.then(as_imove(move, witness_mode)))]
        vertices[vertex] = [s for s, _ in kept]
        for s, hs in kept:
            expand(vertex + (s,), hs, depth + 1)

    expand((s0,), h0.then(as_imove(strategy(h0), witness_mode)), 0)
    return BPerfectTree.explicit(vertices, frontier)


@dataclass
class TruncatedPiece:
    """A nowhere dense piece known up to ``depth``; nodes deeper than that are not trusted."""

    tree: RegularTree
    depth: int
    anchor: tuple
    history: tuple
    witnesses: dict = field(default_factory=dict)

    def nodes(self, cap: int) -> list:
        return self.tree.enumerate_nodes(self.depth, cap)


def _finite_tree(nodes: set, depth: int) -> RegularTree:
    """Regular tree whose nodes up to ``depth`` are ``nodes``; deeper it continues with zeros."""
    edges = {("tail",): ((ChildSpec.of(0), ("tail",)),)}
    for x in nodes:
        if len(x) == depth:
            edges[x] = ((ChildSpec.of(0), ("tail",)),)
        else:
            kids = sorted(y[-1] for y in nodes if len(y) == len(x) + 1 and y[:-1] == x)
            edges[x] = tuple((ChildSpec.of(c), x + (c,)) for c in kids)
    return RegularTree.pruned(Alphabet.omega(), (), edges).relabel()


def _prune_nodes(nodes: set, depth: int) -> set:
    nodes = set(nodes)
    for n in range(depth - 1, -1, -1):
        level = [x for x in nodes if len(x) == n]
        for x in level:
            if not any(len(y) == n + 1 and y[:-1] == x for y in nodes):
                nodes.discard(x)
    return nodes


def strategy_to_cover(strategy: Strategy, cfg: GameConfig, prefix_depth: int = 3) -> list:
    """Depth-truncated nowhere dense pieces covering the plays that beat ``strategy``.

    For each history ``p`` of correct I moves answered by II's strategy and
    each word ``v`` satisfying II's last condition, the piece is the set of
    plays running through ``w + v`` (``w`` the concatenation of ``p``) that
    never continue with ``w + a + c`` where ``a`` meets II's last condition
    and ``c`` meets II's reply to ``a``.  The empty history contributes the
    plays through each opening ``v`` that never continue ``a + c`` with ``c``
    meeting II's reply to the opening ``a``.  Each piece comes with its
    witness map; all words are limited to ``prefix_depth`` letters at most
    ``cfg.letter_cap``.
    """
    D = prefix_depth
    cs = cfg.cs
    letters = range(cfg.letter_cap + 1)
    if D <= 0:
        return [TruncatedPiece(_finite_tree({()}, 0), 0, (), (), {(): None})]
    all_nodes = list(words(letters, D))
    reply_cache = {}

    def reply(h: PlayHistory):
        if h.moves not in reply_cache:
            reply_cache[h.moves] = strategy(h)
        return reply_cache[h.moves]

    def build(h: PlayHistory, anchor: tuple, cond) -> Optional[TruncatedPiece]:
        """Piece for history ``h`` (ending with condition ``cond``, or empty) through ``anchor``."""
        w = h.prefix
        n = len(w)

        def forbidden(x):
            for i in range(n + 1, len(x)):
                a = x[n:i]
                if cond is not None and not cs.satisfies(a, cond):
                    continue
                b2 = reply(h.then(IMove(a)))
                for j in range(i + 1, len(x) + 1):
                    if cs.satisfies(x[i:j], b2):
                        return True
            return False

        good = {x for x in all_nodes if compatible(x, anchor) and not forbidden(x)}
        good = _prune_nodes(good, D)
        if () not in good:
            return None
        wit = {}
        for x in good:
            if len(x) < len(anchor):
                wit[x] = cs.distinguisher(anchor[len(x)])
            else:
                wit[x] = reply(h.then(IMove(x[n:])))
        return TruncatedPiece(_finite_tree(good, D), D, anchor, h.moves, wit)

    pieces = []
    # the empty history: plays through each opening word
    for v in words(letters, min(cfg.move_len_cap, D), min_len=1):
        p = build(PlayHistory(), v, None)
        if p is not None:
            pieces.append(p)
    # histories u0 b1 ... un b(n+1) of correct moves
    frontier = [PlayHistory()]
    while frontier:
        nxt = []
        for h in frontier:
            room = D - len(h.prefix)
            for u in words(letters, room, min_len=1):
                if h.moves and not cs.satisfies(u, h.moves[-1]):
                    continue
                hu = h.then(IMove(u))
                b = reply(hu)
                hb = hu.then(b)
                w = hb.prefix
                for v in words(letters, D - len(w), min_len=1):
                    if cs.satisfies(v, b):
                        p = build(hb, w + v, b)
                        if p is not None:
                            pieces.append(p)
                if len(w) < D:
                    nxt.append(hb)
        frontier = nxt
    return pieces


def check_truncated_piece(piece: TruncatedPiece, cs: ConditionSet, letter_cap: int) -> list:
    """Nodes of ``piece`` whose recorded witness some in-piece continuation satisfies."""
    budget = {"node_depth": piece.depth, "ext_depth": piece.depth, "letter_cap": letter_cap}
    return check_witnesses(piece.tree, cs, piece.witnesses, budget, max_total=piece.depth)
