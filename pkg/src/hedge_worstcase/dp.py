"""Worst-case value curves for two-arm games by backward recursion over a weight grid.

``values[t, k]`` is the largest cumulative loss an adversary can force in a
game of ``t + 1`` rounds that starts from first-arm weight ``k / M``. Each
horizon is built from the previous one::

    L_t(w) = max_l [ w l + (1 - w)(1 - l) + L_{t-1}(W(w, l)) ]

where ``W`` is the Hedge update. Off-grid values of ``L_{t-1}`` come from
linear interpolation (default) or nearest-neighbour lookup.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .adversary import PenaltyPlan, Pattern
from .core import ContractError, GameParams, WeightVector, _frozen, hedge_update
from .scalar_opt import INV_PHI

INTERPOLATIONS = ("linear", "nearest")


@dataclass(frozen=True)
class ValueCurve:
    params: GameParams
    grid_size: int
    values: np.ndarray
    argmax_penalty: np.ndarray
    interpolation: str = "linear"

    @property
    def weights(self) -> np.ndarray:
        return np.arange(self.grid_size + 1) / self.grid_size

    @property
    def horizons(self) -> int:
        return self.values.shape[0]

    def value_at(self, w, horizon: int | None = None):
        """``L_t(w)`` at arbitrary weights, using the curve's interpolation."""
        t = self.horizons - 1 if horizon is None else horizon
        return _lookup(self.values[t], np.asarray(w, dtype=float), self.grid_size, self.interpolation)

    def nearest_index(self, w: float) -> int:
        return int(np.rint(w * self.grid_size))

    def rows(self):
        """``(horizon, w, value, argmax_penalty)`` tuples in horizon-major order."""
        ws = self.weights
        for t in range(self.horizons):
            for k in range(self.grid_size + 1):
                yield t, ws[k], self.values[t, k], self.argmax_penalty[t, k]


def _lookup(prev: np.ndarray, w: np.ndarray, m: int, interpolation: str):
    if interpolation == "linear":
        pos = np.clip(w, 0.0, 1.0) * m
        lo = np.minimum(pos.astype(np.int64), m - 1)
        frac = pos - lo
        return prev[lo] * (1.0 - frac) + prev[lo + 1] * frac
    return prev[np.clip(np.rint(w * m).astype(np.int64), 0, m)]


def _next_weight(w: np.ndarray, l: np.ndarray, beta: float) -> np.ndarray:
    a = w * beta**l
    return a / (a + (1.0 - w) * beta ** (1.0 - l))


def _stage(w, l, prev, m, beta, interpolation):
    return w * l + (1.0 - w) * (1.0 - l) + _lookup(prev, _next_weight(w, l, beta), m, interpolation)


def solve_curve(
    params: GameParams,
    grid_size: int = 10000,
    penalty_grid: int = 1000,
    interpolation: str = "linear",
    refine: bool = True,
    refine_tol: float = 1e-9,
    chunk: int = 2048,
) -> ValueCurve:
    """Tabulate ``L_t`` for ``t = 0 .. T-1`` on the grid ``k / grid_size``.

    The inner maximization scans ``penalty_grid + 1`` penalties and then runs
    a golden-section refinement inside the bracket around the best one. The
    refined point is kept only when it improves on the scan.
    """
    if params.n_options != 2:
        raise ContractError(f"solve_curve supports two options only (got n_options={params.n_options})")
    if grid_size < 100 or penalty_grid < 100:
        raise ContractError(f"grid_size and penalty_grid must be >= 100 (got {grid_size}, {penalty_grid})")
    if interpolation not in INTERPOLATIONS:
        raise ContractError(f"interpolation must be one of {INTERPOLATIONS}, got {interpolation!r}")
    m, P, T, beta = grid_size, penalty_grid, params.horizon, params.beta
    ws = np.arange(m + 1) / m
    ls = np.arange(P + 1) / P
    values = np.empty((T, m + 1))
    argmax = np.empty((T, m + 1))
    values[0] = np.maximum(ws, 1.0 - ws)
    argmax[0] = (ws >= 0.5).astype(float)
    n_iter = int(math.ceil(math.log(refine_tol / (2.0 / P)) / math.log(INV_PHI)))

    for t in range(1, T):
        prev = values[t - 1]
        for s in range(0, m + 1, chunk):
            w = ws[s : s + chunk, None]
            scan = _stage(w, ls[None, :], prev, m, beta, interpolation)
            j = np.argmax(scan, axis=1)
            best_l = ls[j]
            best_v = scan[np.arange(j.size), j]
            if refine:
                lo = ls[np.maximum(j - 1, 0)]
                hi = ls[np.minimum(j + 1, P)]
                rl, rv = _golden_rows(w[:, 0], lo, hi, prev, m, beta, interpolation, n_iter)
                better = rv > best_v
                best_l = np.where(better, rl, best_l)
                best_v = np.where(better, rv, best_v)
            values[t, s : s + chunk] = best_v
            argmax[t, s : s + chunk] = best_l
    return ValueCurve(params, m, _frozen(values), _frozen(argmax), interpolation)


def _golden_rows(w, a, b, prev, m, beta, interpolation, n_iter):
    """Independent golden-section maximizations, one per row, run in lockstep."""
    a = a.copy()
    b = b.copy()
    c = b - INV_PHI * (b - a)
    d = a + INV_PHI * (b - a)
    fc = _stage(w, c, prev, m, beta, interpolation)
    fd = _stage(w, d, prev, m, beta, interpolation)
    for _ in range(n_iter):
        left = fc >= fd
        b = np.where(left, d, b)
        a = np.where(left, a, c)
        keep = np.where(left, c, d)
        kept_val = np.where(left, fc, fd)
        new = np.where(left, b - INV_PHI * (b - a), a + INV_PHI * (b - a))
        new_val = _stage(w, new, prev, m, beta, interpolation)
        c = np.where(left, new, keep)
        fc = np.where(left, new_val, kept_val)
        d = np.where(left, keep, new)
        fd = np.where(left, kept_val, new_val)
    take_c = fc >= fd
    return np.where(take_c, c, d), np.where(take_c, fc, fd)


def recover_penalties(curve: ValueCurve, w0: float, params: GameParams) -> PenaltyPlan:
    """Replay the tabulated argmax penalties forward from ``w0``.

    Each round reads the stored maximizer at the grid point nearest to the
    current weight, for the horizon matching the rounds still to play.
    """
    if not (0.0 <= w0 <= 1.0):
        raise ContractError(f"w0 must lie in [0, 1], got {w0!r}")
    T = params.horizon
    if T > curve.horizons:
        raise ContractError(f"curve covers {curve.horizons} rounds, game needs {T}")
    w = WeightVector.two(w0)
    xs = np.empty(T)
    for t in range(T):
        x = float(curve.argmax_penalty[T - 1 - t, curve.nearest_index(w.first)])
        xs[t] = x
        w = hedge_update(w, [x, 1.0 - x], params)
    return PenaltyPlan.from_first_option(xs, pattern=Pattern.EXPLICIT_ROWS)
