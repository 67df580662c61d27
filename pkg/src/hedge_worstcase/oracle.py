"""Exhaustive search over gridded first-arm penalty sequences for short two-arm games.

This is the reference the other solvers are checked against, so it plays the
game with the plain multiplicative update and nothing clever. No pruning and
no shared evaluation code with the planners.
"""
from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from .adversary import PenaltyPlan, Pattern
from .core import ContractError, GameParams, as_weights
from .scalar_opt import golden_section_max

MAX_ROUNDS = 6


@dataclass(frozen=True)
class OracleResult:
    best_loss: float
    best_plan: PenaltyPlan
    grid_resolution: int
    nodes_explored: int


def _play(w: float, xs, beta: float) -> float:
    total = 0.0
    for x in xs:
        total += w * x + (1.0 - w) * (1.0 - x)
        a = w * beta**x
        w = a / (a + (1.0 - w) * beta ** (1.0 - x))
    return total


def _partition(w: float, x0: float, grid: np.ndarray, rounds: int, beta: float):
    """Best continuation of a game whose first penalty is fixed to ``x0``."""
    loss = np.array([w * x0 + (1.0 - w) * (1.0 - x0)])
    a = w * beta**x0
    weight = np.array([a / (a + (1.0 - w) * beta ** (1.0 - x0))])
    for _ in range(rounds - 1):
        p = weight[:, None]
        x = grid[None, :]
        loss = (loss[:, None] + p * x + (1.0 - p) * (1.0 - x)).ravel()
        a = p * beta**x
        weight = (a / (a + (1.0 - p) * beta ** (1.0 - x))).ravel()
    i = int(np.argmax(loss))
    return float(loss[i]), i, loss.size


def brute_force_max(
    w0,
    params: GameParams,
    q: int = 100,
    refine: bool = False,
    sweeps: int = 3,
    workers: int | None = None,
) -> OracleResult:
    """Maximize the cumulative loss over all sequences in ``{0, 1/q, ..., 1}^T``.

    The search is split by first-round penalty and the partitions may run on
    a thread pool. With ``refine`` the best grid plan is polished by cyclic
    coordinate golden-section passes, each confined to one grid step around
    the current coordinate.
    """
    if params.n_options != 2:
        raise ContractError(f"the oracle supports two options only (got n_options={params.n_options})")
    T = params.horizon
    if q < 20:
        raise ContractError(f"oracle grid q must be >= 20, got {q}")
    if T > MAX_ROUNDS:
        raise ContractError(
            f"refusing brute force for T={T} > {MAX_ROUNDS}: it would evaluate {(q + 1) ** T:.3e} sequences"
        )
    w = as_weights(w0).first
    beta = params.beta
    grid = np.arange(q + 1) / q

    def run(x0):
        return _partition(w, x0, grid, T, beta)

    if workers and workers > 1:
        with ThreadPoolExecutor(workers) as pool:
            parts = list(pool.map(run, grid))
    else:
        parts = [run(x0) for x0 in grid]
    head = int(np.argmax([p[0] for p in parts]))
    best_loss, flat, _ = parts[head]
    nodes = sum(p[2] for p in parts)
    tail = np.unravel_index(flat, (q + 1,) * (T - 1)) if T > 1 else ()
    xs = np.array([grid[head]] + [grid[i] for i in tail], dtype=float)

    if refine:
        for _ in range(sweeps):
            for t in range(T):
                def along(v, t=t):
                    trial = xs.copy()
                    trial[t] = v
                    return _play(w, trial, beta)

                lo, hi = max(0.0, xs[t] - 1.0 / q), min(1.0, xs[t] + 1.0 / q)
                v, val, evals, _ = golden_section_max(along, lo, hi, tol=1e-12)
                nodes += evals
                if val > best_loss:
                    xs[t], best_loss = v, val
        best_loss = _play(w, xs, beta)

    plan = PenaltyPlan.from_first_option(xs, pattern=Pattern.EXPLICIT_ROWS, loss=best_loss)
    return OracleResult(best_loss=best_loss, best_plan=plan, grid_resolution=q, nodes_explored=nodes)
