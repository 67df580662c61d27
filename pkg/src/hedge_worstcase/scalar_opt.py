"""Single-variable maximization on a closed interval.

The objectives met in this package are continuous but kinked, so a plain
golden-section search can lock onto the wrong local maximum. ``maximize_1d``
scans a coarse grid first and only refines around the best grid point.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

INV_PHI = (math.sqrt(5.0) - 1.0) / 2.0


class NonFiniteObjectiveError(ValueError):
    pass


@dataclass(frozen=True)
class ScalarOptResult:
    argmax: float
    max_value: float
    evaluations: int
    bracket_width: float
    bracket: tuple[float, float]


def _finite(value: float, x: float) -> float:
    value = float(value)
    if not math.isfinite(value):
        raise NonFiniteObjectiveError(f"objective is not finite at x={x!r} (value {value!r})")
    return value


def golden_section_max(
    objective: Callable[[float], float], a: float, b: float, tol: float = 1e-10
) -> tuple[float, float, int, tuple[float, float]]:
    """Golden-section search for a maximum of a unimodal function on ``[a, b]``.

    Returns ``(x, f(x), evaluations, final_bracket)``.
    """
    a, b = min(a, b), max(a, b)
    h = b - a
    if h <= tol:
        x = 0.5 * (a + b)
        return x, _finite(objective(x), x), 1, (a, b)
    n = int(math.ceil(math.log(tol / h) / math.log(INV_PHI)))
    c = b - INV_PHI * h
    d = a + INV_PHI * h
    fc = _finite(objective(c), c)
    fd = _finite(objective(d), d)
    evals = 2
    for _ in range(n):
        if fc >= fd:
            b, d, fd = d, c, fc
            h = b - a
            c = b - INV_PHI * h
            fc = _finite(objective(c), c)
        else:
            a, c, fc = c, d, fd
            h = b - a
            d = a + INV_PHI * h
            fd = _finite(objective(d), d)
        evals += 1
    if fc >= fd:
        return c, fc, evals, (a, b)
    return d, fd, evals, (a, b)


def maximize_1d(
    objective: Callable,
    a: float,
    b: float,
    coarse_points: int = 1000,
    tol: float = 1e-10,
    vectorized: bool = False,
) -> ScalarOptResult:
    """Maximize ``objective`` over ``[a, b]``: coarse grid, then golden refinement.

    With ``vectorized=True`` the objective receives the whole coarse grid as
    one array. Ties on the grid keep the leftmost point. The result is never
    worse than the best grid value.
    """
    if not a < b:
        raise ValueError(f"need a < b, got a={a!r}, b={b!r}")
    if coarse_points < 50:
        raise ValueError(f"coarse_points must be >= 50, got {coarse_points}")
    grid = np.linspace(a, b, coarse_points)
    if vectorized:
        values = np.asarray(objective(grid), dtype=float)
        bad = ~np.isfinite(values)
        if bad.any():
            x = grid[np.argmax(bad)]
            raise NonFiniteObjectiveError(f"objective is not finite at x={x!r}")
        scalar = lambda x: float(np.asarray(objective(np.array([x])), dtype=float)[0])  # noqa: E731
    else:
        values = np.array([_finite(objective(x), x) for x in grid])
        scalar = objective
    i = int(np.argmax(values))
    best_x, best_v = float(grid[i]), float(values[i])
    lo = float(grid[max(i - 1, 0)])
    hi = float(grid[min(i + 1, coarse_points - 1)])
    x, v, evals, bracket = golden_section_max(scalar, lo, hi, tol)
    if v > best_v:
        best_x, best_v = x, v
    else:
        # grid point beat the refinement (kink or endpoint): report a tol-wide bracket around it
        bracket = (max(a, best_x - tol / 2), min(b, best_x + tol / 2))
    return ScalarOptResult(
        argmax=best_x,
        max_value=best_v,
        evaluations=coarse_points + evals,
        bracket_width=bracket[1] - bracket[0],
        bracket=bracket,
    )
