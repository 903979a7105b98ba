"""
Solving finite-horizon games exactly
====================================

With caps on word length, letters and the number of conditions, the game
tree is finite. The solver runs backward induction with memoisation and
returns the winner together with a strategy.
"""

import random

from baire_games.conditions import FirstLetterAbove
from baire_games.games import GameConfig, play, solve_finite
from baire_games.generators import random_product_tree
from baire_games.tree import full_kary, full_tree

# %%
# Inside the full tree player I can always answer; inside the 5-ary tree
# player II asks for a first letter above 4. Letters go up to 6, so I can
# always answer the first six conditions when the payoff allows it.
cs = FirstLetterAbove()
for payoff in (full_tree(), full_kary(4)):
    sol = solve_finite(GameConfig(cs, payoff, horizon=2, letter_cap=6, cond_limit=6))
    print(sol.winner, "explored", sol.explored)

# %%
# The winner's strategy plays against the loser's best effort.
cfg = GameConfig(cs, full_kary(4), horizon=2, letter_cap=6, cond_limit=6)
sol = solve_finite(cfg)
print(play(cfg, sol.strategy_for("I"), sol.strategy_for("II")).transcript())

# %%
# In the witness game player I also emits witnesses and must stay inside a
# tree of pairs.
payoff = random_product_tree(random.Random(4))
cfg = GameConfig(cs, None, horizon=3, move_len_cap=1, letter_cap=3, cond_limit=2, witness_payoff=payoff)
print(solve_finite(cfg).winner)
