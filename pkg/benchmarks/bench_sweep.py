"""Benchmark the compiled integration kernels against the pure-Python
fallback on the three hot loops of the forward-backward sweep.

Usage:
    python benchmarks/bench_sweep.py [--steps N] [--repeats R]
"""

import argparse
import json
import pathlib
import time

import numpy as np

import arbo
from arbo import _kernels
from arbo._kernels import fallback
from arbo.model import (
    ControlParams, ModelParams, control_params_to_array, params_to_array,
)

FIXTURES = pathlib.Path(arbo.__file__).parent / "fixtures"


def best_of(fn, repeats):
    best = float("inf")
    for _ in range(repeats):
        t0 = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - t0)
    return best


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--steps", type=int, default=2000,
                        help="RK4 steps per integration (default 2000)")
    parser.add_argument("--repeats", type=int, default=5,
                        help="timing repeats, best-of (default 5)")
    args = parser.parse_args()

    with open(FIXTURES / "table5_control.json", encoding="utf-8") as f:
        cfg = json.load(f)
    p = ModelParams(**cfg["params"])
    c = ControlParams(**cfg["control_params"])
    par = params_to_array(p)
    cpar = control_params_to_array(c)
    x0 = np.asarray(cfg["initial_state"], dtype=float)
    dwts = np.array([cfg["weights"][k] for k in ("D1", "D2", "D3", "D4")])
    n = args.steps
    dt = (cfg["grid"]["tf"] - cfg["grid"]["t0"]) / n
    rng = np.random.default_rng(0)
    u = rng.uniform(0.0, 0.5, (n + 1, 5))
    states = fallback.rk4_controlled(par, cpar, x0, u, dt)

    if _kernels.BACKEND != "cython":
        print("note: compiled backend unavailable; comparing fallback "
              "against itself")

    cases = {
        "rk4_basic": (lambda m: lambda: m.rk4_basic(par, x0, n, dt)),
        "rk4_controlled": (
            lambda m: lambda: m.rk4_controlled(par, cpar, x0, u, dt)),
        "rk4_adjoint": (
            lambda m: lambda: m.rk4_adjoint(par, cpar, dwts, states, u, dt)),
    }

    print(f"{n} steps, best of {args.repeats} "
          f"(active backend: {_kernels.BACKEND})")
    print(f"{'kernel':<16}{'python':>12}{'compiled':>12}{'speedup':>10}")
    for name, make in cases.items():
        t_py = best_of(make(fallback), args.repeats)
        t_cy = best_of(make(_kernels), args.repeats)
        print(f"{name:<16}{t_py * 1e3:>10.2f}ms{t_cy * 1e3:>10.2f}ms"
              f"{t_py / t_cy:>9.1f}x")


if __name__ == "__main__":
    main()
