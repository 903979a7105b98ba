"""Seeded random finite-state trees for tests, benchmarks and demos."""

from __future__ import annotations

import random
from typing import Optional

from .bperfect import BPerfectTree, LabelFamily
from .conditions import ConditionSet
from .product import PairSpec, ProductTree
from .smallness import is_b_nowhere_dense
from .tree import Alphabet, ChildSpec, RegularTree, shortlex_key, word_then


def random_spec(rng: random.Random, alphabet: Alphabet, used: set, max_letter: int = 5) -> Optional[ChildSpec]:
    """A spec avoiding the letters in ``used``; infinite specs only when nothing above their bound is used."""
    top = max(used, default=-1)
    r = rng.random()
    if alphabet.is_omega and r < 0.25:
        k = rng.randint(top + 1, top + 3)
        return ChildSpec.above(k) if k > 0 or rng.random() < 0.5 else ChildSpec.every()
    pool = [x for x in range(max_letter + 1) if x not in used and alphabet.contains(x)]
    if not pool:
        return None
    return ChildSpec.of(*rng.sample(pool, rng.randint(1, min(3, len(pool)))))


def random_tree(rng: random.Random, max_states: int = 6, alphabet: Alphabet = Alphabet.omega(),
                max_letter: int = 5) -> RegularTree:
    """Canonical tree with at most ``max_states`` states (possibly fewer after pruning, possibly empty)."""
    n = rng.randint(1, max_states)
    edges = {}
    for q in range(n):
        used: set = set()
        out = []
        infinite = False
        for _ in range(0 if rng.random() < 0.1 else rng.randint(1, 3)):
            if infinite:
                break
            spec = random_spec(rng, alphabet, used, max_letter)
            if spec is None:
                break
            if spec.kind == "set":
                used.update(spec.letters)
            else:
                infinite = True
            # bias towards the next state so that most states stay reachable
            target = q + 1 if q + 1 < n and rng.random() < 0.4 else rng.randrange(n)
            out.append((spec, target))
        edges[q] = tuple(out)
    return RegularTree.pruned(alphabet, 0, edges).relabel()


def tree_corpus(count: int, seed: int = 0, max_states: int = 6, nonempty: bool = True) -> list:
    """``count`` random trees from one seed; empty trees are skipped when ``nonempty``."""
    rng = random.Random(seed)
    out = []
    while len(out) < count:
        t = random_tree(rng, max_states)
        if nonempty and t.is_empty:
            continue
        out.append(t)
    return out


def random_product_tree(rng: random.Random, max_states: int = 4, max_letter: int = 3) -> ProductTree:
    """Product tree whose pair specs use finite letter sets and finite or co-finite witness specs."""
    n = rng.randint(1, max_states)
    edges = {}
    for q in range(n):
        out = []
        used: set = set()
        for _ in range(rng.randint(1, 3)):
            pool = [x for x in range(max_letter + 1) if x not in used]
            if not pool:
                break
            first = ChildSpec.of(*rng.sample(pool, rng.randint(1, min(2, len(pool)))))
            used.update(first.letters)
            witness = ChildSpec.above(rng.randint(0, 2)) if rng.random() < 0.5 else \
                ChildSpec.of(*rng.sample(range(4), rng.randint(1, 2)))
            out.append((PairSpec(first, witness), rng.randrange(n)))
        edges[q] = tuple(out)
    return ProductTree.pruned(Alphabet.omega(), 0, edges)


# --- certificates for the two players ---

def prefix_code(rng: random.Random, letters, splits: int, max_len: int = 3) -> list:
    """Complete prefix code over ``letters``: split the empty word, then random words ``splits - 1`` times."""
    code = [(x,) for x in letters]
    for _ in range(splits - 1):
        open_words = [w for w in code if len(w) < max_len]
        if not open_words:
            break
        w = rng.choice(open_words)
        code.remove(w)
        code.extend(w + (x,) for x in letters)
    return sorted(code, key=shortlex_key)


def random_bperfect(rng: random.Random, cs_name: str, max_states: int = 3) -> BPerfectTree:
    """Cyclic B-perfect tree for one of the canonical condition sets.

    ex61: every state's labels form a complete binary prefix code.
    ex62: the single letters ``0..k`` plus the family of letters above ``k``,
    so every finite word is comparable with some label; longer conditions
    are met by walking several states.
    ex63: an ``above(k)`` family (with an optional fixed tail) plus some
    labels of a prefix code over ``0..k``.
    """
    n = rng.randint(1, max_states)
    children = {}
    for q in range(n):
        if cs_name == "ex61":
            fams = [LabelFamily.word(w) for w in prefix_code(rng, (0, 1), rng.randint(1, 3))]
        elif cs_name == "ex62":
            k = rng.randint(0, 2)
            fams = [LabelFamily.word((x,)) for x in range(k + 1)] + [LabelFamily(ChildSpec.above(k))]
        elif cs_name == "ex63":
            k = rng.randint(0, 3)
            rest = tuple(rng.randrange(4) for _ in range(rng.randint(0, 1)))
            fams = [LabelFamily(ChildSpec.above(k), rest)]
            code = prefix_code(rng, range(k + 1), rng.randint(1, 2))
            fams += [LabelFamily.word(w) for w in code if rng.random() < 0.5]
        else:
            raise ValueError(f"no B-perfect generator for {cs_name!r}")
        children[q] = tuple((f, rng.randrange(n)) for f in fams)
    alphabet = Alphabet.finite(2) if cs_name == "ex61" else Alphabet.omega()
    return BPerfectTree(alphabet, 0, children)


def lasso(prefix, cycle) -> RegularTree:
    """The single branch ``prefix`` followed by ``cycle`` repeated forever."""
    m = len(cycle)
    loop = RegularTree(Alphabet.omega(), 0, {i: ((ChildSpec.of(cycle[i]), (i + 1) % m),) for i in range(m)})
    return word_then(prefix, loop)


def random_cover(rng: random.Random, cs: ConditionSet, max_pieces: int = 3) -> list:
    """1 to ``max_pieces`` closed pieces, each with an exact nowhere-density witness for ``cs``."""
    pieces = []
    for _ in range(rng.randint(1, max_pieces)):
        if cs.name == "ex61":
            prefix = tuple(rng.randrange(2) for _ in range(rng.randint(0, 3)))
            pieces.append(lasso(prefix, tuple(rng.randrange(2) for _ in range(rng.randint(1, 3)))))
            continue
        while True:
            t = random_tree(rng, 4, max_letter=4)
            if not t.is_empty and is_b_nowhere_dense(t, cs, "exact") is not None:
                pieces.append(t)
                break
    return pieces
