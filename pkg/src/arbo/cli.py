"""Command-line interface: config ingestion, command dispatch, and
deterministic CSV/JSON emission for every analysis in the package.

Exit codes: 0 success, 2 configuration/parse errors, 3 numeric errors,
4 solver non-convergence.
"""

from __future__ import annotations

import argparse
import dataclasses
import json
import math
import os
import sys

import numpy as np

from . import SPEC_VERSION, econ, equilibria, sensitivity
from ._kernels import BACKEND, rk4_basic
from .control import (
    ObjectiveWeights, StrategyMask, forward_backward_sweep,
)
from .equilibria import ResidualError
from .model import (
    STATE_NAMES, ControlParams, ModelParams, ParamError, ZeroPopulationError,
    params_to_array,
)
from .ode import NonFiniteError, TimeGrid, Trajectory
from .stability import eigen_verdict
from .thresholds import ThresholdError, bifurcation_thresholds, derive_constants

EXIT_PARSE = 2
EXIT_NUMERIC = 3
EXIT_NO_CONVERGENCE = 4


class ConfigError(ValueError):
    """Malformed or incomplete run configuration."""


def _jsonable(obj):
    if isinstance(obj, dict):
        return {k: _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return [_jsonable(v) for v in obj.tolist()]
    if isinstance(obj, (np.floating, np.integer)):
        return obj.item()
    if isinstance(obj, float) and math.isnan(obj):
        return None
    if dataclasses.is_dataclass(obj) and not isinstance(obj, type):
        return _jsonable(dataclasses.asdict(obj))
    return obj


def _emit_json(report: dict, out_path) -> None:
    report = dict(report)
    report.setdefault("spec_version", SPEC_VERSION)
    text = json.dumps(_jsonable(report), indent=2) + "\n"
    if out_path:
        with open(out_path, "w", encoding="utf-8") as f:
            f.write(text)
    else:
        sys.stdout.write(text)


def load_config(path) -> dict:
    try:
        with open(path, encoding="utf-8") as f:
            return json.load(f)
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise ConfigError(
            f"config {path} is not valid JSON (line {exc.lineno}, "
            f"column {exc.colno}): {exc.msg}") from exc


def _require(cfg: dict, key: str, where: str = "config"):
    if key not in cfg:
        raise ConfigError(f"missing required field {key!r} in {where}")
    return cfg[key]


def _build_params(cfg: dict) -> ModelParams:
    section = _require(cfg, "params")
    field_names = {f.name for f in dataclasses.fields(ModelParams)}
    missing = field_names - set(section)
    if missing:
        raise ConfigError(f"params section missing fields: {sorted(missing)}")
    unknown = set(section) - field_names
    if unknown:
        raise ConfigError(f"params section has unknown fields: {sorted(unknown)}")
    return ModelParams(**section)


def _build_control_params(cfg: dict) -> ControlParams:
    section = _require(cfg, "control_params")
    return ControlParams(**section)


def _build_weights(cfg: dict) -> ObjectiveWeights:
    section = _require(cfg, "weights")
    return ObjectiveWeights(**section)


def _build_grid(cfg: dict, args) -> TimeGrid:
    section = dict(_require(cfg, "grid"))
    if getattr(args, "tf", None) is not None:
        section["tf"] = args.tf
    if getattr(args, "steps", None) is not None:
        section["n_steps"] = args.steps
    return TimeGrid(t0=section.get("t0", 0.0), tf=_require(section, "tf", "grid"),
                    n_steps=int(_require(section, "n_steps", "grid")))


def _initial_state(cfg: dict) -> np.ndarray:
    x0 = np.asarray(_require(cfg, "initial_state"), dtype=float)
    if x0.shape != (10,):
        raise ConfigError(f"initial_state must have 10 entries, got {x0.shape}")
    return x0


def _seed(cfg: dict, args) -> int:
    if getattr(args, "seed", None) is not None:
        return args.seed
    env = os.environ.get("ARBO_SEED")
    if env is not None:
        try:
            return int(env)
        except ValueError as exc:
            raise ConfigError(f"ARBO_SEED is not an integer: {env!r}") from exc
    return int(cfg.get("seed", 0))


def cmd_thresholds(args) -> int:
    cfg = load_config(args.config)
    p = _build_params(cfg)
    rep = bifurcation_thresholds(p)
    k = derive_constants(p)
    _emit_json({
        "N": rep.net_repro,
        "R0": rep.r0,
        "R0_defined": rep.r0_defined,
        "K_vh": rep.k_vh,
        "K_hv": rep.k_hv,
        "R_c": rep.r_c,
        "R_1b": rep.r_1b,
        "R_2b": rep.r_2b,
        "psi": rep.psi,
        "beta_star": rep.beta_star,
        "beta_bar": rep.beta_bar,
        "beta_minus": rep.beta_minus,
        "beta_plus": rep.beta_plus,
        "derived_constants": k,
    }, args.out)
    return 0


def cmd_equilibria(args) -> int:
    cfg = load_config(args.config)
    p = _build_params(cfg)
    eq = equilibria.solve_endemic(p, stability_checker=lambda x: eigen_verdict(x, p).stable)
    report = {
        "classification": eq.classification.value,
        "case": eq.case,
        "dfe_trivial": eq.dfe_trivial,
        "dfe_biological": eq.dfe_biological,
        "quadratic": eq.quadratic,
        "endemic": [
            {"state": dict(zip(STATE_NAMES, x)), "lambda_h": lam,
             "stable": stable}
            for x, lam, stable in eq.endemic
        ],
        "rejected": [{"lambda_h": lam, "reason": why}
                     for lam, why in eq.rejected],
    }
    _emit_json(report, args.out)
    return 0


def cmd_bifurcation(args) -> int:
    cfg = load_config(args.config)
    p = _build_params(cfg)
    if args.out is None:
        raise ConfigError("bifurcation requires --out CSV path")
    rows = _scan_with_stability(p, args.param, args.lo, args.hi, args.steps)
    equilibria.scan_to_csv(rows, args.out)
    return 0


def _scan_with_stability(p, param_name, lo, hi, steps):
    out = []
    for value in np.linspace(lo, hi, steps + 1):
        pv = dataclasses.replace(p, **{param_name: float(value)})
        out.extend(equilibria.bifurcation_scan(
            pv, param_name, float(value), float(value), 0,
            stability_checker=lambda x, pv=pv: eigen_verdict(x, pv).stable))
    return out


def cmd_simulate(args) -> int:
    cfg = load_config(args.config)
    p = _build_params(cfg)
    grid = _build_grid(cfg, args)
    x0 = _initial_state(cfg)
    values = rk4_basic(params_to_array(p), x0, grid.n_steps, grid.dt)
    if not np.all(np.isfinite(values)):
        bad = int(np.argwhere(~np.isfinite(values).all(axis=1))[0][0])
        raise NonFiniteError(bad, grid.t0 + bad * grid.dt)
    traj = Trajectory(grid, values)
    if args.out is None:
        raise ConfigError("simulate requires --out CSV path")
    traj.to_csv(args.out, STATE_NAMES)
    return 0


def cmd_sensitivity(args) -> int:
    cfg = load_config(args.config)
    sens_cfg = cfg.get("sensitivity", {})
    ranges_cfg = sens_cfg.get("ranges")
    if ranges_cfg is None:
        dist = sensitivity.baseline_ranges()
    else:
        dist = sensitivity.ParamDistribution(
            {k: tuple(v) for k, v in ranges_cfg.items()})
    n = args.samples or int(sens_cfg.get("samples", 5000))
    seed = _seed(cfg, args)
    samples = sensitivity.lhs_sample(dist, n, seed)
    outputs = sensitivity.r0_values(samples)
    dist_stats = sensitivity.r0_distribution(samples)
    probs = sensitivity.condition_probabilities(samples)
    report = sensitivity.prcc(samples, outputs)
    if args.prcc_csv:
        sensitivity.prcc_to_csv(report, args.prcc_csv)
    if args.hist_csv:
        sensitivity.histogram_to_csv(dist_stats["histogram"], args.hist_csv)
    _emit_json({
        "n": n,
        "seed": seed,
        "r0_mean": dist_stats["mean"],
        "r0_std": dist_stats["std"],
        "p_r0_ge_1": dist_stats["p_ge_1"],
        "probabilities": probs,
        "prcc": report.coefficients,
        "excluded": list(report.excluded),
    }, args.out)
    return 0


def cmd_control(args) -> int:
    cfg = load_config(args.config)
    p = _build_params(cfg)
    c = _build_control_params(cfg)
    w = _build_weights(cfg)
    grid = _build_grid(cfg, args)
    x0 = _initial_state(cfg)
    sweep_cfg = cfg.get("sweep", {})
    strategy = args.strategy or cfg.get("strategy", "Z")
    mask = StrategyMask.named(strategy)
    result = forward_backward_sweep(
        p, c, w, x0, grid, mask,
        mix=float(sweep_cfg.get("mix", 0.5)),
        tol=float(sweep_cfg.get("tol", 1e-3)),
        max_iters=int(sweep_cfg.get("max_iters", 200)))
    if args.controls_csv:
        result.controls.to_csv(args.controls_csv,
                               ["u1", "u2", "u3", "u4", "u5"])
    if args.states_csv:
        result.states.to_csv(args.states_csv, STATE_NAMES)
    cumulated = econ.cumulated_infectious(result.states)
    _emit_json({
        "strategy": strategy,
        "J": result.objective_j,
        "iterations": result.iterations,
        "converged": result.converged,
        "suspect": result.suspect,
        "cumulated_Ih": cumulated,
        "kernel_backend": BACKEND,
        "log": result.log,
    }, args.out)
    if not result.converged:
        print("sweep did not converge within the iteration budget",
              file=sys.stderr)
        return EXIT_NO_CONVERGENCE
    return 0


def cmd_icer(args) -> int:
    cfg = load_config(args.config)
    section = cfg.get("icer", {})
    strategies = section.get("strategies")
    if not strategies:
        raise ConfigError("missing required field 'icer.strategies' in config")
    reports = []
    for row in strategies:
        reports.append(econ.StrategyReport(
            name=_require(row, "name", "icer.strategies"),
            cumulated_ih=float(row.get("cumulated_ih", 0.0)),
            efficiency_percent=float(row.get("efficiency", 0.0)),
            total_cost=float(_require(row, "cost", "icer.strategies")),
            infections_averted=float(_require(row, "averted", "icer.strategies"))))
    table = econ.icer_analysis(reports)
    _emit_json({
        "rows": table.rows,
        "eliminations": [
            {"round": rnd, "strategy": name, "reason": why}
            for rnd, name, why in table.eliminations
        ],
        "comparisons": [
            {"round": rnd, "first": a, "second": b,
             "icer_first": f, "icer_incremental": g}
            for rnd, a, b, f, g in table.comparisons
        ],
        "kept": table.kept,
        "equivalent": table.equivalent,
    }, args.out)
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="arbo",
        description="Arboviral transmission model: thresholds, equilibria, "
                    "sensitivity, optimal control, and cost-effectiveness.")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(sp):
        sp.add_argument("--config", required=True, help="JSON run configuration")
        sp.add_argument("--out", default=None, help="output path (default stdout)")
        sp.add_argument("--seed", type=int, default=None,
                        help="RNG seed (overrides ARBO_SEED and config)")

    sp = sub.add_parser("thresholds", help="threshold report JSON")
    common(sp)
    sp.set_defaults(func=cmd_thresholds)

    sp = sub.add_parser("equilibria", help="equilibrium set JSON")
    common(sp)
    sp.set_defaults(func=cmd_equilibria)

    sp = sub.add_parser("bifurcation", help="branch-scan CSV")
    common(sp)
    sp.add_argument("--param", default="beta_hv")
    sp.add_argument("--lo", type=float, required=True)
    sp.add_argument("--hi", type=float, required=True)
    sp.add_argument("--steps", type=int, default=500)
    sp.set_defaults(func=cmd_bifurcation)

    sp = sub.add_parser("simulate", help="uncontrolled trajectory CSV")
    common(sp)
    sp.add_argument("--tf", type=float, default=None)
    sp.add_argument("--steps", type=int, default=None)
    sp.set_defaults(func=cmd_simulate)

    sp = sub.add_parser("sensitivity", help="LHS/PRCC report")
    common(sp)
    sp.add_argument("--samples", type=int, default=None)
    sp.add_argument("--prcc-csv", default=None)
    sp.add_argument("--hist-csv", default=None)
    sp.set_defaults(func=cmd_sensitivity)

    sp = sub.add_parser("control", help="forward-backward sweep")
    common(sp)
    sp.add_argument("--strategy", default=None,
                    choices=["Z1", "Z2", "Z3", "Z4", "Z"])
    sp.add_argument("--tf", type=float, default=None)
    sp.add_argument("--steps", type=int, default=None)
    sp.add_argument("--controls-csv", default=None)
    sp.add_argument("--states-csv", default=None)
    sp.set_defaults(func=cmd_control)

    sp = sub.add_parser("icer", help="ICER dominance analysis")
    common(sp)
    sp.set_defaults(func=cmd_icer)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (ThresholdError, ResidualError, NonFiniteError,
            ZeroPopulationError, ArithmeticError) as exc:
        print(f"numeric error: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    except (ConfigError, ParamError, sensitivity.RangeError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PARSE


if __name__ == "__main__":
    sys.exit(main())
