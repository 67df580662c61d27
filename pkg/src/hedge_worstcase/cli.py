"""Command-line front end that writes solver results as CSV or JSON.

Examples::

    hedge-worst solve --beta 0.8 --rounds 10 --w0 0.883
    hedge-worst curve --beta 0.1 --rounds 10 --grid 1000 --out curve.csv
    hedge-worst trace --beta 0.8 --rounds 10 --w0 0.62 --plan greedy
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np

from . import adversary, analysis, dp, oracle
from .core import ContractError, GameParams, WeightVector, play_game

EXIT_OK, EXIT_VALIDATION, EXIT_IO = 0, 2, 3
COMMANDS = ("trace", "solve", "curve", "oracle", "bounds", "equalweights", "rotation")
PLANS = ("optimal", "greedy", "equal", "rotating")


@dataclass(frozen=True)
class RunConfig:
    command: str
    beta: float
    t_rounds: int
    n_options: int = 2
    w0: tuple[float, ...] = ()
    grid_m: int = 1000
    penalty_grid_p: int = 400
    oracle_q: int = 100
    output_path: Optional[str] = None
    format: Optional[str] = None
    plan: str = "optimal"
    penalties: tuple[float, ...] = field(default=())
    refine: bool = False

    def params(self) -> GameParams:
        return GameParams(self.beta, self.n_options, self.t_rounds)

    def start(self) -> WeightVector:
        if not self.w0:
            return WeightVector.uniform(self.n_options)
        if len(self.w0) == 1 and self.n_options == 2:
            return WeightVector.two(self.w0[0])
        w = WeightVector(self.w0)
        if w.n != self.n_options:
            raise ContractError(f"--w0 has {w.n} components but --options is {self.n_options}")
        return w


def _fmt(v) -> str:
    if isinstance(v, (bool, np.bool_)):
        return str(int(v))
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    if isinstance(v, (float, np.floating)):
        return "%.12g" % v
    return str(v)


def _csv(header: Sequence[str], rows) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    for row in rows:
        writer.writerow([_fmt(v) for v in row])
    return buf.getvalue()


def _json(obj) -> str:
    def default(o):
        if isinstance(o, np.ndarray):
            return o.tolist()
        if isinstance(o, np.generic):
            return o.item()
        raise TypeError(f"not JSON serializable: {type(o).__name__}")

    return json.dumps(obj, sort_keys=True, indent=2, default=default) + "\n"


def _table(fmt: str, header: Sequence[str], rows: list) -> str:
    if fmt == "json":
        return _json([dict(zip(header, r)) for r in rows])
    return _csv(header, rows)


def _record(fmt: str, obj: dict) -> str:
    if fmt == "csv":
        keys = sorted(obj)
        return _csv(keys, [[obj[k] if not isinstance(obj[k], list) else json.dumps(obj[k]) for k in keys]])
    return _json(obj)


def _plan_for(cfg: RunConfig, params: GameParams, w0: WeightVector):
    if cfg.penalties:
        rows = np.asarray(cfg.penalties, dtype=float)
        if rows.size == params.horizon and params.n_options == 2:
            return adversary.PenaltyPlan.from_first_option(rows)
        if rows.size != params.horizon * params.n_options:
            raise ContractError(
                f"--penalties needs {params.horizon} first-arm values or {params.horizon}x{params.n_options} rows"
            )
        return adversary.PenaltyPlan(rows.reshape(params.horizon, params.n_options))
    if cfg.plan == "greedy":
        return adversary.greedy_binary_plan(w0, params)
    if cfg.plan == "equal":
        return adversary.equal_weights_plan(params)
    if cfg.plan == "rotating":
        base = np.zeros(params.n_options)
        base[0] = 1.0
        return adversary.rotating_plan(params, base)
    return adversary.optimal_plan(w0, params)


def _trace(cfg: RunConfig, fmt: str) -> str:
    params, w0 = cfg.params(), cfg.start()
    trace = play_game(w0, _plan_for(cfg, params, w0), params)
    n = params.n_options
    header = ["round", *(f"w_{i + 1}" for i in range(n)), *(f"l_{i + 1}" for i in range(n)), "loss", "cumulative"]
    cum = trace.cumulative
    rows = [
        [t, *trace.weights[t], *trace.penalties[t], trace.losses[t], cum[t]] for t in range(params.horizon)
    ]
    return _table(fmt, header, rows)


def _plan_summary(plan: adversary.PenaltyPlan, loss: float) -> dict:
    return {
        "pattern": plan.pattern.value,
        "adjustment": plan.adjustment,
        "transition_length": plan.transition_length,
        "loss": loss,
        "first_option_penalties": plan.first_option.tolist(),
    }


def _solve(cfg: RunConfig, fmt: str) -> str:
    params, w0 = cfg.params(), cfg.start()
    plan = adversary.optimal_plan(w0, params)
    greedy = adversary.greedy_binary_plan(w0, params)
    out = _plan_summary(plan, play_game(w0, plan, params).cumulative_loss)
    out["greedy_loss"] = play_game(w0, greedy, params).cumulative_loss
    out.update(beta=params.beta, rounds=params.horizon, w0=w0.weights.tolist())
    return _record(fmt, out)


def _curve(cfg: RunConfig, fmt: str) -> str:
    curve = dp.solve_curve(cfg.params(), grid_size=cfg.grid_m, penalty_grid=cfg.penalty_grid_p)
    return _table(fmt, ["horizon", "w", "value", "argmax_penalty"], list(curve.rows()))


def _oracle(cfg: RunConfig, fmt: str) -> str:
    params, w0 = cfg.params(), cfg.start()
    res = oracle.brute_force_max(w0, params, q=cfg.oracle_q, refine=cfg.refine)
    out = _plan_summary(res.best_plan, res.best_loss)
    out.update(best_loss=res.best_loss, grid_resolution=res.grid_resolution, nodes_explored=res.nodes_explored)
    return _record(fmt, out)


def _bounds(cfg: RunConfig, fmt: str) -> str:
    w0 = cfg.start()
    return _record(fmt, analysis.binary_error_bounds(w0.first, cfg.params()).to_dict())


def _equalweights(cfg: RunConfig, fmt: str) -> str:
    rows = []
    for T in range(2, cfg.t_rounds + 1):
        p = GameParams(cfg.beta, 2, T)
        x = adversary.equal_weights_x_star(p)
        rows.append([T, x, adversary.equal_weights_loss(x, p)])
    return _table(fmt, ["rounds", "x_star", "loss"], rows)


def _rotation(cfg: RunConfig, fmt: str) -> str:
    rows = []
    for n in range(2, cfg.n_options + 1):
        p = GameParams(cfg.beta, n, 1)
        ideal = adversary.ideal_rotation(p)
        lce = analysis.cycle_loss_equal_digamma(n, cfg.beta)
        rows.append([n, lce, lce / n, ideal.per_cycle_loss, ideal.per_cycle_loss / n])
    return _table(fmt, ["options", "equal_cycle_loss", "equal_per_round", "ideal_cycle_loss", "ideal_per_round"], rows)


_DISPATCH = {
    "trace": (_trace, "csv"),
    "solve": (_solve, "json"),
    "curve": (_curve, "csv"),
    "oracle": (_oracle, "json"),
    "bounds": (_bounds, "json"),
    "equalweights": (_equalweights, "csv"),
    "rotation": (_rotation, "csv"),
}


def run(cfg: RunConfig, stdout=None) -> int:
    """Execute one command; returns the process exit status."""
    stdout = stdout or sys.stdout
    func, default_fmt = _DISPATCH[cfg.command]
    fmt = cfg.format or default_fmt
    try:
        cfg.params()
        text = func(cfg, fmt)
    except (ContractError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_VALIDATION
    if cfg.output_path in (None, "-"):
        stdout.write(text)
        return EXIT_OK
    try:
        with open(cfg.output_path, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    except OSError as exc:
        print(f"error: cannot write {cfg.output_path}: {exc}", file=sys.stderr)
        return EXIT_IO
    return EXIT_OK


def _floats(text: str) -> tuple[float, ...]:
    try:
        return tuple(float(v) for v in text.replace(";", ",").split(",") if v.strip())
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated numbers, got {text!r}")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="hedge-worst", description="Worst-case adversaries for the Hedge algorithm.")
    sub = parser.add_subparsers(dest="command", required=True)
    for name in COMMANDS:
        p = sub.add_parser(name)
        p.add_argument("--beta", type=float, required=True)
        p.add_argument("--rounds", type=int, default=10)
        p.add_argument("--options", type=int, default=2)
        p.add_argument("--w0", type=_floats, default=())
        p.add_argument("--grid", type=int, default=1000)
        p.add_argument("--penalty-grid", type=int, default=400)
        p.add_argument("--oracle-grid", type=int, default=100)
        p.add_argument("--out", default=None)
        p.add_argument("--format", choices=("csv", "json"), default=None)
        if name == "trace":
            p.add_argument("--plan", choices=PLANS, default="optimal")
            p.add_argument("--penalties", type=_floats, default=())
        if name == "oracle":
            p.add_argument("--refine", action="store_true")
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_OK if exc.code == 0 else EXIT_VALIDATION
    cfg = RunConfig(
        command=args.command,
        beta=args.beta,
        t_rounds=args.rounds,
        n_options=args.options,
        w0=args.w0,
        grid_m=args.grid,
        penalty_grid_p=args.penalty_grid,
        oracle_q=args.oracle_grid,
        output_path=args.out,
        format=args.format,
        plan=getattr(args, "plan", "optimal"),
        penalties=getattr(args, "penalties", ()),
        refine=getattr(args, "refine", False),
    )
    return run(cfg)


if __name__ == "__main__":
    sys.exit(main())
