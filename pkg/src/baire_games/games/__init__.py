"""The condition game: play, strategy synthesis and the finite-horizon solver."""

from .engine import (GameConfig, IMove, PlayHistory, PlayResult, Strategy, Verdict, condition_table,
                     constant_condition, move_table, play, random_strategy)
from .solver import SolverResourceError, solve_base, solve_finite
from .synthesis import (SynthesisFault, TruncatedPiece, bperfect_response, check_truncated_piece,
                        strategy_I_from_bperfect, strategy_II_from_cover, strategy_to_bperfect,
                        strategy_to_cover)

__all__ = [
    "GameConfig", "IMove", "PlayHistory", "PlayResult", "Strategy", "Verdict", "condition_table",
    "constant_condition", "move_table", "play", "random_strategy", "SolverResourceError", "solve_base",
    "solve_finite", "SynthesisFault", "TruncatedPiece", "bperfect_response", "check_truncated_piece",
    "strategy_I_from_bperfect", "strategy_II_from_cover", "strategy_to_bperfect", "strategy_to_cover",
]
