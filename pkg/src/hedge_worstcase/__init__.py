"""Worst-case adversaries against the Hedge (multiplicative weights) player."""
from .adversary import (
    PenaltyPlan,
    Pattern,
    RotationSpec,
    equal_weights_loss,
    equal_weights_plan,
    equal_weights_x_star,
    greedy_binary_plan,
    ideal_rotation,
    optimal_plan,
    rotating_plan,
    transition_phase_length,
)
from .analysis import (
    ErrorBoundReport,
    IntersectionArea,
    LemmaCheck,
    big_f,
    binary_error_bounds,
    check_lemma1,
    check_lemma3,
    check_lemma5,
    check_lemma6_7,
    cycle_loss,
    cycle_loss_equal_digamma,
    cycle_loss_equal_direct,
    digamma,
    greedy_rotation_deficit,
    intersection_area,
    rotation_error,
    transition_length_ceil,
)
from .core import (
    ContractError,
    GameParams,
    GameTrace,
    PenaltyVector,
    UnreachableTargetError,
    WeightVector,
    f_walk,
    hedge_update,
    play_game,
    round_loss,
    transition_penalty,
)
from .dp import ValueCurve, recover_penalties, solve_curve
from .oracle import OracleResult, brute_force_max
from .scalar_opt import NonFiniteObjectiveError, ScalarOptResult, golden_section_max, maximize_1d

__version__ = "0.1.0"

__all__ = [
    "ContractError",
    "ErrorBoundReport",
    "GameParams",
    "GameTrace",
    "IntersectionArea",
    "LemmaCheck",
    "NonFiniteObjectiveError",
    "OracleResult",
    "Pattern",
    "PenaltyPlan",
    "PenaltyVector",
    "RotationSpec",
    "ScalarOptResult",
    "UnreachableTargetError",
    "ValueCurve",
    "WeightVector",
    "big_f",
    "binary_error_bounds",
    "brute_force_max",
    "check_lemma1",
    "check_lemma3",
    "check_lemma5",
    "check_lemma6_7",
    "cycle_loss",
    "cycle_loss_equal_digamma",
    "cycle_loss_equal_direct",
    "digamma",
    "equal_weights_loss",
    "equal_weights_plan",
    "equal_weights_x_star",
    "f_walk",
    "golden_section_max",
    "greedy_binary_plan",
    "greedy_rotation_deficit",
    "hedge_update",
    "ideal_rotation",
    "intersection_area",
    "maximize_1d",
    "optimal_plan",
    "play_game",
    "recover_penalties",
    "rotating_plan",
    "rotation_error",
    "round_loss",
    "solve_curve",
    "transition_length_ceil",
    "transition_penalty",
    "transition_phase_length",
]
