"""Adversary penalty plans: greedy, rotating, closed forms and the optimal planner.

The optimal planner handles two arms only. Penalty rows are stored as a
``(T, N)`` array. For two arms the first column fully describes a plan.
"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .core import (
    ContractError,
    GameParams,
    PenaltyVector,
    WeightVector,
    _frozen,
    as_weights,
    hedge_update,
    play_game,
    two_option_total,
)
from .scalar_opt import maximize_1d

TIE_TOL = 1e-12


class Pattern(str, enum.Enum):
    GREEDY_ALL_ONES = "GreedyAllOnes"
    ADJUSTED_FIRST_ROUND = "AdjustedFirstRound"
    GREEDY_THEN_ROTATION = "GreedyThenRotation"
    ADJUSTED_ENTRY_ROTATION = "AdjustedEntryRotation"
    EQUAL_WEIGHTS_CLOSED_FORM = "EqualWeightsClosedForm"
    EXPLICIT_ROWS = "ExplicitRows"


@dataclass(frozen=True)
class PenaltyPlan:
    """A full penalty sequence plus how it was built.

    ``adjustment`` is the single free parameter of the pattern (for example
    the amount removed from the first-round unit penalty) and
    ``transition_length`` the number of leading greedy rounds before rotation.
    ``loss`` is the cumulative loss the builder expects, when it computed one.
    """

    rows: np.ndarray
    pattern: Pattern = Pattern.EXPLICIT_ROWS
    adjustment: Optional[float] = None
    transition_length: Optional[int] = None
    loss: Optional[float] = None

    def __post_init__(self):
        rows = np.array(self.rows, dtype=float)
        if rows.ndim != 2 or rows.shape[0] < 1:
            raise ContractError(f"plan rows must be a non-empty (T, N) array, got shape {rows.shape}")
        rows = np.stack([PenaltyVector(r).penalties for r in rows])
        if self.adjustment is not None and not (-1e-12 <= self.adjustment <= 1 + 1e-12):
            raise ContractError(f"adjustment must lie in [0, 1], got {self.adjustment!r}")
        object.__setattr__(self, "rows", _frozen(rows))
        object.__setattr__(self, "pattern", Pattern(self.pattern))

    @classmethod
    def from_first_option(cls, xs, **kwargs) -> "PenaltyPlan":
        xs = np.asarray(xs, dtype=float)
        return cls(np.column_stack([xs, 1.0 - xs]), **kwargs)

    @property
    def first_option(self) -> np.ndarray:
        return self.rows[:, 0]

    @property
    def horizon(self) -> int:
        return self.rows.shape[0]

    def __len__(self) -> int:
        return self.rows.shape[0]

    def mirrored(self) -> "PenaltyPlan":
        """Same plan with the two arms swapped."""
        return PenaltyPlan(
            self.rows[:, ::-1],
            pattern=self.pattern,
            adjustment=self.adjustment,
            transition_length=self.transition_length,
            loss=self.loss,
        )


@dataclass(frozen=True)
class RotationSpec:
    ideal_weights: np.ndarray
    per_cycle_loss: float
    cycle_length: int


def _require_two(params: GameParams, what: str):
    if params.n_options != 2:
        raise ContractError(f"{what} supports two options only (got n_options={params.n_options})")


def greedy_binary_plan(w0, params: GameParams) -> PenaltyPlan:
    """Put the whole unit penalty on the heaviest arm every round.

    Weights within ``TIE_TOL`` of the maximum count as tied; ties go to the
    lowest index.
    """
    w = as_weights(w0)
    rows = np.zeros((params.horizon, params.n_options))
    for t in range(params.horizon):
        arm = int(np.flatnonzero(w.weights >= w.weights.max() - TIE_TOL)[0])
        rows[t, arm] = 1.0
        w = hedge_update(w, rows[t], params)
    switches = np.any(rows[1:] != rows[:-1])
    pattern = Pattern.GREEDY_THEN_ROTATION if switches else Pattern.GREEDY_ALL_ONES
    return PenaltyPlan(rows, pattern=pattern, adjustment=0.0)


def transition_phase_length(w: float, params: GameParams) -> int:
    """Rounds the first weight stays clear of the intersection area under greedy play.

    ``max(min(floor(ln((1-w)/w)/ln(beta) - 1), T), 0)``.
    """
    if not (0.5 < w < 1.0):
        raise ContractError(f"w must lie in (1/2, 1); mirror the arms first (got {w!r})")
    raw = math.floor(math.log((1 - w) / w) / params.log_beta - 1)
    return max(min(raw, params.horizon), 0)


def rotating_plan(params: GameParams, base_row) -> PenaltyPlan:
    """Row ``t`` is ``base_row`` cyclically shifted right by ``t`` positions."""
    base = PenaltyVector(base_row).penalties
    if base.size != params.n_options:
        raise ContractError(f"base row has {base.size} entries, expected {params.n_options}")
    rows = np.stack([np.roll(base, t) for t in range(params.horizon)])
    return PenaltyPlan(rows, pattern=Pattern.EXPLICIT_ROWS)


def ideal_rotation(params: GameParams) -> RotationSpec:
    """Weights that maximize the loss of a cyclic unit-penalty rotation."""
    n = params.n_options
    lb = params.log_beta
    # (1 - beta^(1/N)) / (1 - beta), written with expm1 to stay accurate near beta = 1
    head = math.expm1(lb / n) / math.expm1(lb)
    weights = head * np.exp(lb * np.arange(n) / n)
    return RotationSpec(_frozen(weights), per_cycle_loss=n * head, cycle_length=n)


def _alternating(start: int, length: int) -> np.ndarray:
    return (np.arange(length) + start) % 2 == 0


def equal_weights_x_star(params: GameParams) -> float:
    """First-round penalty for a two-arm game that starts from ``(1/2, 1/2)``.

    ``3/4`` for odd ``T``. For even ``T = 2k`` it maximizes the unified loss
    expression over ``x``, which is the positive stationary point
    ``y = beta^(2x)`` of that expression, capped at 1.
    """
    T = params.horizon
    if T % 2 == 1:
        return 0.75
    b = params.beta
    k = T // 2
    y = ((1 - b) * b**1.5 * math.sqrt(k * (k - 1)) - b * b) / (b + k - b * k)
    if y <= 0:
        return 1.0
    return min(1.0, math.log(y) / (2 * params.log_beta))


def equal_weights_loss(x: float | np.ndarray, params: GameParams):
    """Total loss of ``(x, 0, 1, 0, ...)`` from equal weights."""
    b = params.beta
    T = params.horizon
    x = np.asarray(x, dtype=float)
    up = math.ceil((T - 1) / 2)
    down = (T - 1) // 2
    out = 0.5 + up * b ** (1 - x) / (b**x + b ** (1 - x)) + down * b**x / (b**x + b ** (2 - x))
    return float(out) if out.ndim == 0 else out


def equal_weights_plan(params: GameParams) -> PenaltyPlan:
    _require_two(params, "equal_weights_plan")
    x = equal_weights_x_star(params)
    xs = np.empty(params.horizon)
    xs[0] = x
    xs[1:] = _alternating(1, params.horizon - 1)
    return PenaltyPlan.from_first_option(
        xs,
        pattern=Pattern.EQUAL_WEIGHTS_CLOSED_FORM,
        adjustment=x,
        transition_length=0,
        loss=equal_weights_loss(x, params),
    )


def _greedy_run(w: float, params: GameParams) -> int:
    """Leading unit penalties a greedy adversary applies before the first weight drops below 1/2."""
    if w * params.beta ** params.horizon > 1 - w:
        return params.horizon
    r = math.ceil(math.log((1 - w) / w) / params.log_beta)
    return max(1, min(r, params.horizon))


def _candidate_families(w: float, params: GameParams, spread: int):
    """Yield ``(pattern, r, template, position, lowers_one)`` for every single-parameter family.

    The adjusted entry is ``1 - d`` when ``lowers_one`` is set and ``d`` otherwise.
    """
    T = params.horizon
    r0 = _greedy_run(w, params)
    for r in range(max(1, r0 - spread), min(T, r0 + spread) + 1):
        # 1-d, 1 x (r-1), then 0, 1, 0, ...
        xs = np.ones(T)
        xs[r:] = _alternating(1, T - r)
        yield Pattern.ADJUSTED_FIRST_ROUND, r, xs, 0, True
        if r < T:
            # 1 x r, d, then 1, 0, 1, ...
            xs = np.ones(T)
            xs[r + 1 :] = _alternating(0, T - r - 1)
            yield Pattern.ADJUSTED_ENTRY_ROTATION, r, xs, r, False


def optimal_plan(
    w0,
    params: GameParams,
    coarse_points: int = 1000,
    tol: float = 1e-10,
    spread: int = 2,
) -> PenaltyPlan:
    """Loss-maximizing two-arm plan from the greedy plan and single-adjustment patterns.

    Every family is optimized over its free parameter on ``[0, 1]`` and the
    candidate with the highest realized loss wins. Exact ties go to the greedy
    plan. ``spread`` controls how many greedy-run lengths around the greedy
    one are tried.
    """
    _require_two(params, "optimal_plan")
    w0 = as_weights(w0)
    w = w0.first
    if w < 0.5:
        return optimal_plan(WeightVector(w0.weights[::-1]), params, coarse_points, tol, spread).mirrored()
    if w == 0.5:
        return equal_weights_plan(params)

    greedy = greedy_binary_plan(w0, params)
    best = greedy
    best_loss = play_game(w0, greedy, params).cumulative_loss
    if w == 1.0:
        return _with_loss(best, best_loss)

    beta = params.beta
    for pattern, r, template, pos, lowers_one in _candidate_families(w, params, spread):

        def objective(d, template=template, pos=pos, lowers_one=lowers_one):
            d = np.asarray(d, dtype=float)
            xs = np.broadcast_to(template, d.shape + template.shape).copy()
            xs[..., pos] = 1.0 - d if lowers_one else d
            return two_option_total(w, xs, beta)

        res = maximize_1d(objective, 0.0, 1.0, coarse_points, tol, vectorized=True)
        d = min(max(res.argmax, 0.0), 1.0)
        xs = template.copy()
        xs[pos] = 1.0 - d if lowers_one else d
        plan = PenaltyPlan.from_first_option(xs, pattern=pattern, adjustment=d, transition_length=r)
        loss = play_game(w0, plan, params).cumulative_loss
        if loss > best_loss + TIE_TOL:
            best, best_loss = plan, loss
    return _with_loss(best, best_loss)


def _with_loss(plan: PenaltyPlan, loss: float) -> PenaltyPlan:
    return PenaltyPlan(
        plan.rows,
        pattern=plan.pattern,
        adjustment=plan.adjustment,
        transition_length=plan.transition_length,
        loss=loss,
    )
