"""The Hedge player: weight updates, per-round loss and game playback.

Everything here is a pure function over immutable values. Weights and
penalties are stored as read-only numpy arrays.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

RENORMALIZE_TOL = 1e-9
PENALTY_SUM_TOL = 1e-12


class ContractError(ValueError):
    """An input violates the documented precondition of an operation."""


class UnreachableTargetError(ContractError):
    """A target weight cannot be reached from the current weight in one round."""


def _frozen(a: np.ndarray) -> np.ndarray:
    a.setflags(write=False)
    return a


@dataclass(frozen=True)
class GameParams:
    """Fixed definition of a game: adaptation factor, arms and horizon."""

    beta: float
    n_options: int = 2
    horizon: int = 1

    def __post_init__(self):
        beta = float(self.beta)
        if not (0.0 < beta < 1.0) or math.isnan(beta):
            raise ContractError(f"beta must lie in the open interval (0, 1), got {self.beta!r}")
        if int(self.n_options) != self.n_options or self.n_options < 2:
            raise ContractError(f"n_options must be an integer >= 2, got {self.n_options!r}")
        if int(self.horizon) != self.horizon or self.horizon < 1:
            raise ContractError(f"horizon must be an integer >= 1, got {self.horizon!r}")
        object.__setattr__(self, "beta", beta)
        object.__setattr__(self, "n_options", int(self.n_options))
        object.__setattr__(self, "horizon", int(self.horizon))

    @property
    def log_beta(self) -> float:
        return math.log(self.beta)

    def with_horizon(self, horizon: int) -> "GameParams":
        return GameParams(self.beta, self.n_options, horizon)


@dataclass(frozen=True)
class WeightVector:
    """Normalized bet fractions, one per arm.

    Sums that drift from 1 by at most ``RENORMALIZE_TOL`` are renormalized
    silently; anything larger is treated as a logic error.
    """

    weights: np.ndarray

    def __post_init__(self):
        w = np.array(self.weights, dtype=float).reshape(-1)
        if w.size < 2:
            raise ContractError("a weight vector needs at least two components")
        if not np.all(np.isfinite(w)) or np.any(w < 0):
            raise ContractError(f"weights must be finite and nonnegative, got {w}")
        total = w.sum()
        if abs(total - 1.0) > RENORMALIZE_TOL:
            raise ContractError(f"weights must sum to 1 (got sum {total!r})")
        w = w / total
        object.__setattr__(self, "weights", _frozen(w))

    @classmethod
    def two(cls, w: float) -> "WeightVector":
        """Two-arm vector ``(w, 1 - w)``."""
        return cls(np.array([w, 1.0 - w]))

    @classmethod
    def uniform(cls, n: int) -> "WeightVector":
        return cls(np.full(n, 1.0 / n))

    @property
    def first(self) -> float:
        return float(self.weights[0])

    @property
    def n(self) -> int:
        return self.weights.size

    def __len__(self) -> int:
        return self.weights.size

    def __iter__(self):
        return iter(self.weights.tolist())

    def __getitem__(self, i):
        return self.weights[i]


@dataclass(frozen=True)
class PenaltyVector:
    """One round of adversary penalties; components in [0, 1] summing to 1."""

    penalties: np.ndarray

    def __post_init__(self):
        p = np.array(self.penalties, dtype=float).reshape(-1)
        if p.size < 2:
            raise ContractError("a penalty vector needs at least two components")
        if not np.all(np.isfinite(p)):
            raise ContractError(f"penalties must be finite, got {p}")
        if np.any(p < -PENALTY_SUM_TOL) or np.any(p > 1 + PENALTY_SUM_TOL):
            raise ContractError(f"penalties must lie in [0, 1], got {p}")
        if abs(p.sum() - 1.0) > PENALTY_SUM_TOL:
            raise ContractError(f"penalties must sum to 1 (got sum {p.sum()!r})")
        object.__setattr__(self, "penalties", _frozen(np.clip(p, 0.0, 1.0)))

    @classmethod
    def two(cls, x: float) -> "PenaltyVector":
        """Two-arm penalty ``(x, 1 - x)``."""
        return cls(np.array([x, 1.0 - x]))

    @classmethod
    def unit(cls, n: int, arm: int) -> "PenaltyVector":
        p = np.zeros(n)
        p[arm] = 1.0
        return cls(p)

    @property
    def n(self) -> int:
        return self.penalties.size

    def __len__(self) -> int:
        return self.penalties.size

    def __iter__(self):
        return iter(self.penalties.tolist())

    def __getitem__(self, i):
        return self.penalties[i]


@dataclass(frozen=True)
class GameTrace:
    """Per-round record of one played game.

    ``weights[t]`` is the bet distribution used in round ``t`` and
    ``penalties[t]`` the adversary's response to it.
    """

    params: GameParams
    weights: np.ndarray
    penalties: np.ndarray
    losses: np.ndarray
    cumulative_loss: float
    final_weights: np.ndarray = field(repr=False)

    @property
    def weights_per_round(self) -> list[WeightVector]:
        return [WeightVector(w) for w in self.weights]

    @property
    def penalties_per_round(self) -> list[PenaltyVector]:
        return [PenaltyVector(p) for p in self.penalties]

    @property
    def cumulative(self) -> np.ndarray:
        return np.cumsum(self.losses)


def as_weights(w) -> WeightVector:
    """Coerce ``w`` to a WeightVector; a bare scalar means ``(w, 1 - w)``."""
    if isinstance(w, WeightVector):
        return w
    if np.ndim(w) == 0:
        return WeightVector.two(float(w))
    return WeightVector(w)


def _as_penalties(p) -> PenaltyVector:
    return p if isinstance(p, PenaltyVector) else PenaltyVector(p)


def hedge_update(w, l, params: GameParams) -> WeightVector:
    """Multiplicative update ``W_i = w_i beta^l_i / sum_j w_j beta^l_j``.

    Computed in the log domain so long runs with small ``beta`` do not
    underflow before normalization.
    """
    w = as_weights(w)
    l = _as_penalties(l)
    if w.n != l.n or w.n != params.n_options:
        raise ContractError(
            f"dimension mismatch: weights {w.n}, penalties {l.n}, n_options {params.n_options}"
        )
    with np.errstate(divide="ignore"):
        logw = np.log(w.weights) + l.penalties * params.log_beta
    logw -= logw.max()
    unnorm = np.exp(logw)
    return WeightVector(unnorm / unnorm.sum())


def round_loss(w, l) -> float:
    """Player's loss for one round, ``sum_i w_i l_i``."""
    w = as_weights(w)
    l = _as_penalties(l)
    if w.n != l.n:
        raise ContractError(f"dimension mismatch: weights {w.n}, penalties {l.n}")
    return float(np.dot(w.weights, l.penalties))


def play_game(w0, plan, params: GameParams) -> GameTrace:
    """Let Hedge respond to ``plan`` from ``w0`` and record every round.

    ``plan`` is a :class:`PenaltyPlan` or any sequence of penalty rows.
    """
    rows = getattr(plan, "rows", plan)
    rows = [_as_penalties(r) for r in rows]
    if len(rows) != params.horizon:
        raise ContractError(f"plan has {len(rows)} rows but the horizon is {params.horizon}")
    w = as_weights(w0)
    if w.n != params.n_options:
        raise ContractError(f"w0 has {w.n} components but n_options is {params.n_options}")
    weights = np.empty((params.horizon, params.n_options))
    penalties = np.empty_like(weights)
    losses = np.empty(params.horizon)
    for t, l in enumerate(rows):
        weights[t] = w.weights
        penalties[t] = l.penalties
        losses[t] = round_loss(w, l)
        w = hedge_update(w, l, params)
    return GameTrace(
        params=params,
        weights=_frozen(weights),
        penalties=_frozen(penalties),
        losses=_frozen(losses),
        cumulative_loss=float(math.fsum(losses)),
        final_weights=w.weights,
    )


def _check_interior(w: float, name: str = "w") -> float:
    w = float(w)
    if not (0.0 < w < 1.0):
        raise ContractError(f"{name} must lie strictly inside (0, 1), got {w!r}")
    return w


def _sigmoid(z):
    z = np.asarray(z, dtype=float)
    out = np.empty_like(z)
    pos = z >= 0
    out[pos] = 1.0 / (1.0 + np.exp(-z[pos]))
    ez = np.exp(z[~pos])
    out[~pos] = ez / (1.0 + ez)
    return out


def f_walk(w: float, x, params: GameParams):
    """First-arm weight after a net signed penalty offset ``x`` from ``w``.

    ``f(w, x) = w beta^x / (w beta^x + 1 - w)``. Accepts scalar or array ``x``.
    """
    w = _check_interior(w)
    z = math.log(w) - math.log1p(-w) + np.asarray(x, dtype=float) * params.log_beta
    out = _sigmoid(z)
    return float(out) if out.ndim == 0 else out


def transition_penalty(u: float, u_target: float, params: GameParams) -> float:
    """First-arm penalty that moves the first weight from ``u`` to ``u_target`` in one round."""
    u = _check_interior(u, "u")
    u_target = _check_interior(u_target, "u_target")
    x = 0.5 + math.log(u_target * (1 - u) / (u * (1 - u_target))) / (2 * params.log_beta)
    if x < -1e-12 or x > 1 + 1e-12:
        raise UnreachableTargetError(
            f"weight {u_target!r} is not reachable from {u!r} in one round "
            f"(required penalty {x:.6g} outside [0, 1])"
        )
    return min(max(x, 0.0), 1.0)


def two_option_losses(w: float, first_penalties, beta: float) -> np.ndarray:
    """Per-round losses of a two-arm game given only the first-arm penalties.

    Vectorized over leading axes: ``first_penalties`` of shape ``(..., T)``
    returns losses of the same shape. Uses the closed form of the walk so
    many candidate plans can be scored at once.
    """
    x = np.asarray(first_penalties, dtype=float)
    shifted = np.cumsum(x, axis=-1) - x
    offset = 2.0 * shifted - np.arange(x.shape[-1])
    if w <= 0.0 or w >= 1.0:
        p = np.full_like(x, float(w >= 1.0))
    else:
        z = math.log(w) - math.log1p(-w) + offset * math.log(beta)
        p = _sigmoid(z)
    return p * x + (1.0 - p) * (1.0 - x)


def two_option_total(w: float, first_penalties, beta: float):
    """Cumulative loss of :func:`two_option_losses` along the last axis."""
    return two_option_losses(w, first_penalties, beta).sum(axis=-1)
