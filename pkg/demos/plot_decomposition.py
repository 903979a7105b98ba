"""
Splitting a closed set into a kernel and small pieces
=====================================================

A regular tree describes a closed set of integer sequences. Repeatedly
removing the nodes that never reach an infinitely branching node leaves a
superperfect kernel; what was removed is a countable union of compact sets.
"""

from baire_games.conditions import FirstLetterAbove
from baire_games.smallness import cantor_bendixson, is_b_nowhere_dense, is_sigma_bounded
from baire_games.tree import two_branch

# %%
# The tree below branches into everything after ``0`` and follows a single
# branch after ``1``.
t = two_branch()
print(t.enumerate_nodes(2, 3))

# %%
# One iteration removes the single branch; the kernel keeps the wide part.
kernel, pieces, trace = cantor_bendixson(t)
print("iterations:", trace.iterations)
for p in pieces:
    print("piece at", p.anchor, "finitely branching:", p.tree.is_finitely_branching())
print("kernel contains (0, 7):", kernel.contains_prefix((0, 7)))
print("sigma-bounded:", is_sigma_bounded(t)[0])

# %%
# For "first letter above b" conditions, small sets are the finitely
# branching ones. The removed piece gets a certificate, the full tree does not.
print(is_b_nowhere_dense(pieces[0].tree, FirstLetterAbove()) is not None)
print(is_b_nowhere_dense(t, FirstLetterAbove()) is not None)
