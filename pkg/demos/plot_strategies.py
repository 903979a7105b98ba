"""
Playing the condition game with synthesized strategies
======================================================

Player I proposes finite words, player II answers with a condition the next
word must satisfy. A B-perfect tree inside the payoff yields a surviving
strategy for I; a cover of the payoff by small closed pieces yields a
winning strategy for II.
"""

import random

from baire_games.bperfect import body_tree
from baire_games.conditions import FirstLetterAbove, FirstLetterIs
from baire_games.games import (GameConfig, play, random_strategy, strategy_I_from_bperfect,
                               strategy_II_from_cover)
from baire_games.generators import lasso, random_bperfect
from baire_games.tree import union

# %%
# Player I follows a generated B-perfect tree and survives random conditions.
cs = FirstLetterAbove()
tree = random_bperfect(random.Random(1), "ex63")
cfg = GameConfig(cs, body_tree(tree), horizon=4, move_len_cap=8, letter_cap=32, cond_limit=6)
result = play(cfg, strategy_I_from_bperfect(tree, cs), random_strategy("II", cfg, "demo"))
print(result.transcript())

# %%
# Two single branches over the letters 0 and 1 form a cover of their union.
# Player II refutes every continuation of I within two rounds.
cs = FirstLetterIs()
pieces = [lasso((0,), (1,)), lasso((), (1, 0))]
cfg = GameConfig(cs, union(pieces), horizon=4, move_len_cap=2, letter_cap=1, cond_limit=2)
result = play(cfg, random_strategy("I", cfg, "demo"), strategy_II_from_cover(pieces, cs))
print(result.transcript())
