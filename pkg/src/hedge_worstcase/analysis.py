"""Closed-form quantities and inequality checks for the two-arm worst-case game.

Covers the adjusted-greedy loss ``F_n``, the lemma validators, error bounds
for the greedy adversary, cycle losses of rotating schemes and the digamma
function those losses reduce to.
"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .adversary import PenaltyPlan, _greedy_run, ideal_rotation, rotating_plan
from .core import ContractError, GameParams, WeightVector, as_weights, f_walk, play_game
from .scalar_opt import maximize_1d

SLACK = 1e-12
EULER_GAMMA = 0.57721566490153286061

# B_2k / (2k) for k = 1..7, used in the asymptotic digamma series
_PSI_SERIES = (1 / 12, -1 / 120, 1 / 252, -1 / 240, 1 / 132, -691 / 32760, 1 / 12)


def digamma(z: float) -> float:
    """psi(z) for real ``z``; poles at non-positive integers raise ``ValueError``."""
    z = float(z)
    if z <= 0.0:
        if z == math.floor(z):
            raise ValueError(f"digamma has a pole at {z!r}")
        return digamma(1.0 - z) - math.pi / math.tan(math.pi * z)
    acc = 0.0
    while z < 10.0:
        acc -= 1.0 / z
        z += 1.0
    inv2 = 1.0 / (z * z)
    series = 0.0
    p = inv2
    for c in _PSI_SERIES:
        series += c * p
        p *= inv2
    return acc + math.log(z) - 0.5 / z - series


def cycle_loss_equal_direct(n_options: int, beta: float) -> float:
    """Cycle loss from equal weights as the sum ``sum_i 1 / (i beta + N - i)``."""
    return math.fsum(1.0 / (i * beta + n_options - i) for i in range(n_options))


def cycle_loss_equal_digamma(n_options: int, beta: float) -> float:
    """Cycle loss of a unit-penalty rotation from equal weights, via digamma.

    ``(psi(1 + N/(1-beta)) - psi(1 + N beta/(1-beta))) / (1 - beta)``, which
    becomes ``gamma + psi(1 + N)`` at ``beta = 0``. ``beta`` may be 0 here.
    """
    if int(n_options) != n_options or n_options < 2:
        raise ContractError(f"n_options must be an integer >= 2, got {n_options!r}")
    if not (0.0 <= beta < 1.0):
        raise ContractError(f"beta must lie in [0, 1), got {beta!r}")
    if beta == 0.0:
        return EULER_GAMMA + digamma(1.0 + n_options)
    s = 1.0 - beta
    return (digamma(1.0 + n_options / s) - digamma(1.0 + n_options * beta / s)) / s


def cycle_loss(w0, params: GameParams) -> float:
    """Loss over one full rotation of a unit penalty starting on arm 1."""
    w = as_weights(w0).weights
    if w.size != params.n_options:
        raise ContractError(f"w0 has {w.size} components but n_options is {params.n_options}")
    before = np.concatenate([[0.0], np.cumsum(w)[:-1]])
    after = 1.0 - before
    return float(w[0] + np.sum(w[1:] / (params.beta * before[1:] + after[1:])))


def big_f(n: int, eps: float, w: float, params: GameParams) -> float:
    """Loss of ``(1 - eps, 1, ..., 1)`` over ``n + 1`` rounds from first weight ``w``."""
    if n < 0 or int(n) != n:
        raise ContractError(f"n must be a nonnegative integer, got {n!r}")
    if not (0.0 <= eps <= 1.0):
        raise ContractError(f"eps must lie in [0, 1], got {eps!r}")
    f0 = f_walk(w, 0.0, params)
    rest = f_walk(w, np.arange(1, n + 1) - 2.0 * eps, params) if n else np.zeros(0)
    return math.fsum([(1 - eps) * f0, eps * (1 - f0), *np.atleast_1d(rest)])


@dataclass(frozen=True)
class LemmaCheck:
    """Outcome of one inequality check.

    ``margin`` is the amount by which the claimed-larger side wins; negative
    means the inequality failed. ``degenerate`` marks cases where both sides
    coincide within ``SLACK``.
    """

    holds: bool
    margin: float
    degenerate: bool = False

    @property
    def violated(self) -> bool:
        return self.margin <= -SLACK

    def __bool__(self) -> bool:
        return self.holds


def _strict(margin: float) -> LemmaCheck:
    return LemmaCheck(holds=margin > SLACK, margin=margin, degenerate=abs(margin) <= SLACK)


def _require_eps(eps: float):
    if not (0.0 < eps <= 1.0):
        raise ContractError(f"eps must lie in (0, 1], got {eps!r}")


def check_lemma1(w0, base_row, params: GameParams) -> LemmaCheck:
    """Weights under a rotating plan repeat with period ``N``.

    Plays ``2N`` rounds; the margin is minus the largest deviation.
    """
    n = params.n_options
    p2 = params.with_horizon(2 * n)
    trace = play_game(w0, rotating_plan(p2, base_row), p2)
    weights = np.vstack([trace.weights, trace.final_weights])
    margin = -float(np.max(np.abs(weights[n:] - weights[: n + 1])))
    return LemmaCheck(holds=margin >= -SLACK, margin=margin, degenerate=False)


def check_lemma3(w: float, eps: float, n: int, params: GameParams) -> LemmaCheck:
    """Softening the first unit penalty by ``eps`` loses when greedy never reaches 1/2."""
    if not (w > 0.5 and w * params.beta ** (n + 1) > 1 - w):
        raise ContractError(f"lemma needs w > 1/2 and w beta^(n+1) > 1 - w (w={w}, n={n}, beta={params.beta})")
    _require_eps(eps)
    return _strict(big_f(n, 0.0, w, params) - big_f(n, eps, w, params))


def check_lemma5(w: float, eps: float, n: int, params: GameParams) -> LemmaCheck:
    """Taking ``eps`` off the first round beats taking it off round ``n``.

    Both plans reach the same final weight ``f(n + 1 - 2 eps)``; a mismatch
    beyond ``SLACK`` raises ``ArithmeticError``.
    """
    if not (w > 0.5 and w * params.beta**n > 1 - w):
        raise ContractError(f"lemma needs w > 1/2 and w beta^n > 1 - w (w={w}, n={n}, beta={params.beta})")
    _require_eps(eps)
    p = params.with_horizon(n + 1)
    early = np.ones(n + 1)
    early[0] = 1 - eps
    late = np.ones(n + 1)
    late[n] = 1 - eps
    start = WeightVector.two(w)
    te = play_game(start, PenaltyPlan.from_first_option(early), p)
    tl = play_game(start, PenaltyPlan.from_first_option(late), p)
    target = f_walk(w, n + 1 - 2 * eps, params)
    gap = max(abs(te.final_weights[0] - target), abs(tl.final_weights[0] - target))
    if gap > SLACK:
        raise ArithmeticError(f"early and late plans end {gap:.3g} apart from f(n + 1 - 2 eps)")
    return _strict(te.cumulative_loss - tl.cumulative_loss)


def _two_round_loss(w: float, x1: float, x2: float, params: GameParams) -> float:
    p = params.with_horizon(2)
    return play_game(WeightVector.two(w), PenaltyPlan.from_first_option([x1, x2]), p).cumulative_loss


def lemma6_7_preferred(w: float, w_target: float, params: GameParams) -> tuple[float, float]:
    """The two-round plan the adversary should use to move from ``w`` to ``w_target``.

    ``(x, 0)`` when the weight rises and ``(1, x)`` when it falls.
    """
    lo, hi = 0.5, 1 / (1 + params.beta)
    if not (lo < w < hi and lo < w_target < hi):
        raise ContractError(f"w and w_target must lie in (1/2, 1/(1+beta)), got {w}, {w_target}")
    shift = (math.log(w_target / (1 - w_target)) - math.log(w / (1 - w))) / params.log_beta
    x = 1.0 + shift / 2 if w_target >= w else shift / 2
    if not (-SLACK <= x <= 1 + SLACK):
        raise ContractError(f"w_target={w_target} is not reachable from w={w} in two rounds")
    x = min(max(x, 0.0), 1.0)
    return (x, 0.0) if w_target >= w else (1.0, x)


def check_lemma6_7(w: float, w_target: float, split, params: GameParams) -> LemmaCheck:
    """The preferred two-round plan beats any other split reaching the same weight."""
    x1, x2 = (float(v) for v in split)
    if not (0.0 <= x1 <= 1.0 and 0.0 <= x2 <= 1.0):
        raise ContractError(f"split entries must lie in [0, 1], got {split!r}")
    a, b = lemma6_7_preferred(w, w_target, params)
    if abs((x1 + x2) - (a + b)) > 1e-9:
        raise ContractError(
            f"split {split!r} sums to {x1 + x2:.12g} but reaching w_target needs {a + b:.12g}"
        )
    return _strict(_two_round_loss(w, a, b, params) - _two_round_loss(w, x1, x2, params))


def rotation_error(beta: float) -> float:
    """Largest per-pair loss gap between ideal and worst rotational weights."""
    if not (0.0 <= beta <= 1.0):
        raise ContractError(f"beta must lie in [0, 1], got {beta!r}")
    return 2 / (1 + math.sqrt(beta)) - 0.5 - 1 / (1 + beta)


@dataclass(frozen=True)
class IntersectionArea:
    """Weights from which 1/2 is reachable in a single round."""

    lower: float
    upper: float

    def __contains__(self, w: float) -> bool:
        return self.lower <= w <= self.upper


def intersection_area(params: GameParams) -> IntersectionArea:
    b = params.beta
    return IntersectionArea(lower=b / (1 + b), upper=1 / (1 + b))


def transition_length_ceil(w: float, params: GameParams) -> int:
    """Smallest ``T1`` with ``w beta^T1 <= 1 - w``."""
    if not (0.5 < w < 1.0):
        raise ContractError(f"w must lie in (1/2, 1), got {w!r}")
    return max(1, math.ceil(math.log((1 - w) / w) / params.log_beta))


class Category(str, enum.Enum):
    I = "I"
    II = "II"
    III = "III"


def classify(w: float, params: GameParams) -> Category:
    b, T = params.beta, params.horizon
    if w * b**T > 1 - w:
        return Category.I
    if w * b ** (T - 1) > 1 - w:
        return Category.II
    return Category.III


@dataclass(frozen=True)
class ErrorBoundReport:
    """Upper bound on how much the greedy adversary can fall short of the optimum.

    ``transition_bound`` covers the first ``t1_transition`` rounds and
    ``rotation_total_bound`` the remaining rotational rounds. When the
    numerically optimal first-round softening ``optimal_eps`` is at most 1/4
    the sharper ``conjecture_bound`` is also valid and is what
    ``transition_bound`` reports.
    """

    t1_transition: int
    category: Category
    transition_bound: float
    rotation_per_cycle_bound: float
    rotation_total_bound: float
    total_bound: float
    optimal_eps: Optional[float] = None
    conjecture_confirmed: Optional[bool] = None
    conjecture_bound: Optional[float] = None
    loose_bound: Optional[float] = None

    def to_dict(self) -> dict:
        out = {k: getattr(self, k) for k in self.__dataclass_fields__}
        out["category"] = self.category.value
        return out


def binary_error_bounds(w: float, params: GameParams) -> ErrorBoundReport:
    if not (0.5 < w < 1.0):
        raise ContractError(f"w must lie in (1/2, 1), got {w!r}")
    T = params.horizon
    cat = classify(w, params)
    per_cycle = rotation_error(params.beta)
    t1 = min(transition_length_ceil(w, params), T)
    if cat is Category.I:
        return ErrorBoundReport(T, cat, 0.0, per_cycle, 0.0, 0.0)

    res = maximize_1d(lambda e: big_f(t1 - 1, e, w, params), 0.0, 1.0, coarse_points=200, tol=1e-9)
    eps = res.argmax
    ks = np.arange(1, t1)
    sharp = float(np.sum(f_walk(w, ks - 0.5, params) - f_walk(w, ks, params))) if t1 > 1 else 0.0
    loose = w - f_walk(w, t1 - 1, params)
    if eps <= 0.25:
        transition, confirmed = sharp, True
    elif eps <= 0.5:
        transition, confirmed = loose, False
    else:
        transition, confirmed = 0.5, False

    rotation = math.ceil((T - t1) / 2) * per_cycle if cat is Category.III else 0.0
    return ErrorBoundReport(
        t1_transition=t1,
        category=cat,
        transition_bound=transition,
        rotation_per_cycle_bound=per_cycle,
        rotation_total_bound=rotation,
        total_bound=transition + rotation,
        optimal_eps=eps,
        conjecture_confirmed=confirmed,
        conjecture_bound=sharp,
        loose_bound=loose,
    )


def greedy_rotation_deficit(w: float, params: GameParams) -> float:
    """How far greedy rotation sits from the ideal first weight ``1/(1+sqrt(beta))``.

    Greedy enters rotation oscillating between ``f(r-1)`` above 1/2 and
    ``f(r)`` below it; the comparison uses the mean first-arm weight over a
    cycle seen from the penalized arm.
    """
    if not (0.5 < w < 1.0):
        raise ContractError(f"w must lie in (1/2, 1), got {w!r}")
    r = _greedy_run(w, params.with_horizon(10**9))
    ideal = ideal_rotation(params).ideal_weights[0]
    return float(ideal - (f_walk(w, r - 1, params) + 1 - f_walk(w, r, params)) / 2)


__all__ = [
    "Category",
    "ErrorBoundReport",
    "IntersectionArea",
    "LemmaCheck",
    "big_f",
    "binary_error_bounds",
    "check_lemma1",
    "check_lemma3",
    "check_lemma5",
    "check_lemma6_7",
    "classify",
    "cycle_loss",
    "cycle_loss_equal_digamma",
    "cycle_loss_equal_direct",
    "digamma",
    "greedy_rotation_deficit",
    "intersection_area",
    "lemma6_7_preferred",
    "rotation_error",
    "transition_length_ceil",
]
