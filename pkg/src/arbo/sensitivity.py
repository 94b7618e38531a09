"""Latin hypercube sampling over parameter ranges, reproduction-number
distribution statistics, equilibrium-regime probabilities, and partial
rank correlation coefficients."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from scipy.stats import rankdata

from .model import ModelParams
from .thresholds import bifurcation_thresholds, net_reproductive_number

PARAM_ORDER = (
    "lambda_h_in", "mu_h", "a", "beta_hv", "beta_vh", "gamma_h", "delta",
    "sigma", "eta_h", "eta_v", "mu_v", "gamma_v", "theta", "mu_b",
    "Gamma_E", "Gamma_L", "mu_E", "mu_L", "mu_P", "s", "l",
)

_MU_H = 1.0 / (67.0 * 365.0)


def _pm(center: float, frac: float) -> tuple[float, float]:
    return center * (1.0 - frac), center * (1.0 + frac)


def baseline_ranges() -> "ParamDistribution":
    """Default uniform ranges for the global sensitivity analysis.

    Tabulated range parameters use their listed extremes; single-value
    parameters get a proportional band around the point estimate.
    """
    return ParamDistribution({
        "lambda_h_in": (1.8, 7.2),
        "mu_h": _pm(_MU_H, 0.35),
        "a": _pm(1.0, 0.50),
        "beta_hv": (0.02, 0.75),
        "beta_vh": (0.02, 0.75),
        "gamma_h": (1.0 / 15.0, 1.0 / 3.0),
        "delta": _pm(1e-3, 0.20),
        "sigma": _pm(0.1428, 0.40),
        "eta_h": (0.0, 0.999),
        "eta_v": (0.0, 0.999),
        "mu_v": (1.0 / 30.0, 1.0 / 14.0),
        "gamma_v": (1.0 / 21.0, 0.5),
        "theta": _pm(0.08, 0.75),
        "mu_b": _pm(6.0, 0.15),
        "Gamma_E": (1e3, 1e5),
        "Gamma_L": (5e2, 5e4),
        "mu_E": (0.2, 0.4),
        "mu_L": (0.2, 0.4),
        "mu_P": _pm(0.4, 0.40),
        "s": _pm(0.7, 0.45),
        "l": _pm(0.5, 0.60),
    })


class RangeError(ValueError):
    """A sampling range is malformed or out of the parameter's domain."""


class SingularSampleError(ValueError):
    """A non-degenerate parameter column is constant; regression would
    be singular."""


@dataclass(frozen=True)
class ParamDistribution:
    """Per-parameter uniform ranges [lo, hi]; point parameters may use
    degenerate ranges (lo == hi)."""

    ranges: dict

    def __post_init__(self):
        unknown = set(self.ranges) - set(PARAM_ORDER)
        if unknown:
            raise RangeError(f"unknown parameters: {sorted(unknown)}")
        missing = set(PARAM_ORDER) - set(self.ranges)
        if missing:
            raise RangeError(f"missing parameters: {sorted(missing)}")
        for name, (lo, hi) in self.ranges.items():
            if not lo <= hi:
                raise RangeError(f"{name}: lo {lo!r} > hi {hi!r}")

    def bounds(self, name: str) -> tuple[float, float]:
        return self.ranges[name]

    def degenerate(self, name: str) -> bool:
        lo, hi = self.ranges[name]
        return lo == hi


@dataclass(frozen=True)
class SampleSet:
    """An LHS design: the raw matrix (n x n_params, column order
    PARAM_ORDER) plus the materialized parameter objects."""

    matrix: np.ndarray = field(repr=False)
    params: list = field(repr=False)
    seed: int
    distribution: ParamDistribution

    @property
    def n(self) -> int:
        return self.matrix.shape[0]


@dataclass(frozen=True)
class PRCCReport:
    coefficients: dict
    excluded: tuple
    n: int
    seed: int


def lhs_sample(dist: ParamDistribution, n: int, seed: int) -> SampleSet:
    """Stratified uniform design: each range is split into n equal
    strata with one draw per stratum, stratum order independently
    permuted per parameter.  Fully determined by the seed."""
    if n < 2:
        raise ValueError(f"need n >= 2, got {n}")
    rng = np.random.default_rng(seed)
    matrix = np.empty((n, len(PARAM_ORDER)))
    for j, name in enumerate(PARAM_ORDER):
        lo, hi = dist.bounds(name)
        perm = rng.permutation(n)
        quantiles = (perm + rng.random(n)) / n
        matrix[:, j] = lo + (hi - lo) * quantiles
    params = [ModelParams(**dict(zip(PARAM_ORDER, row))) for row in matrix]
    return SampleSet(matrix=matrix, params=params, seed=seed, distribution=dist)


def r0_of(p: ModelParams) -> float:
    """R0 for one draw; 0 by convention when the vector population does
    not establish."""
    if net_reproductive_number(p) <= 1.0:
        return 0.0
    return bifurcation_thresholds(p).r0


def r0_values(samples: SampleSet) -> np.ndarray:
    return np.array([r0_of(p) for p in samples.params])


def r0_distribution(samples: SampleSet, n_bins: int = 50) -> dict:
    """Summary statistics and a fixed-bin histogram of R0 over the draws."""
    values = r0_values(samples)
    top = float(values.max())
    edges = np.linspace(0.0, top if top > 0 else 1.0, n_bins + 1)
    counts, _ = np.histogram(values, bins=edges)
    return {
        "mean": float(values.mean()),
        "std": float(values.std()),
        "p_ge_1": float(np.mean(values >= 1.0)),
        "histogram": {"edges": edges, "counts": counts},
        "values": values,
    }


def condition_probabilities(samples: SampleSet) -> dict:
    """Empirical frequencies of the equilibrium regimes.

    two_endemic_low / two_endemic_high are the two sub-cases of the
    two-equilibria window below R0 = 1; the three top-level events
    (no vectors / subcritical / supercritical) partition the draws.
    """
    n = samples.n
    trivial = 0
    sub = 0
    sup = 0
    two_low = 0
    two_high = 0
    for p in samples.params:
        if net_reproductive_number(p) <= 1.0:
            trivial += 1
            continue
        rep = bifurcation_thresholds(p)
        if rep.r0 >= 1.0:
            sup += 1
            continue
        sub += 1
        if rep.r_1b is not None:
            if rep.r_c < rep.r0 < min(1.0, rep.r_1b):
                two_low += 1
            elif max(rep.r_c, rep.r_2b) < rep.r0 < 1.0:
                two_high += 1
    return {
        "p_no_vectors": trivial / n,
        "p_vectors": (sub + sup) / n,
        "p_subcritical": sub / n,
        "p_supercritical": sup / n,
        "p_two_endemic_low": two_low / n,
        "p_two_endemic_high": two_high / n,
        "p_two_endemic": (two_low + two_high) / n,
        "p_no_endemic_subcritical": (sub - two_low - two_high) / n,
    }


def prcc(samples: SampleSet, outputs) -> PRCCReport:
    """Partial rank correlation of each parameter against the output.

    All columns are rank-transformed (average ranks on ties); for each
    parameter, both its ranks and the output ranks are regressed on all
    other parameters' ranks, and the coefficient is the Pearson
    correlation of the two residual vectors.  Degenerate-range columns
    are excluded.
    """
    outputs = np.asarray(outputs, dtype=float)
    n = samples.n
    if outputs.shape != (n,):
        raise ValueError(f"outputs shape {outputs.shape} != ({n},)")
    active = [j for j, name in enumerate(PARAM_ORDER)
              if not samples.distribution.degenerate(name)]
    if n <= len(active) + 2:
        raise ValueError(f"need n > {len(active) + 2} samples, got {n}")
    for j in active:
        col = samples.matrix[:, j]
        if np.all(col == col[0]):
            raise SingularSampleError(
                f"parameter {PARAM_ORDER[j]} is constant over the sample")

    ranks = np.column_stack([rankdata(samples.matrix[:, j]) for j in active])
    out_ranks = rankdata(outputs)
    coeffs = {}
    for idx, j in enumerate(active):
        others = np.delete(ranks, idx, axis=1)
        design = np.column_stack([np.ones(n), others])
        design = (design - design.mean(axis=0)) / np.where(
            design.std(axis=0) > 0, design.std(axis=0), 1.0)
        design[:, 0] = 1.0
        coef_x, *_ = np.linalg.lstsq(design, ranks[:, idx], rcond=None)
        coef_y, *_ = np.linalg.lstsq(design, out_ranks, rcond=None)
        res_x = ranks[:, idx] - design @ coef_x
        res_y = out_ranks - design @ coef_y
        coeffs[PARAM_ORDER[j]] = float(np.corrcoef(res_x, res_y)[0, 1])
    excluded = tuple(name for name in PARAM_ORDER
                     if samples.distribution.degenerate(name))
    return PRCCReport(coefficients=coeffs, excluded=excluded, n=n,
                      seed=samples.seed)


def prcc_to_csv(report: PRCCReport, path) -> None:
    with open(path, "w", encoding="utf-8") as f:
        f.write("parameter,prcc\n")
        for name, value in report.coefficients.items():
            f.write(f"{name},{value:.17g}\n")


def histogram_to_csv(hist: dict, path) -> None:
    edges = hist["edges"]
    counts = hist["counts"]
    with open(path, "w", encoding="utf-8") as f:
        f.write("bin_lo,bin_hi,count\n")
        for i, c in enumerate(counts):
            f.write(f"{edges[i]:.17g},{edges[i + 1]:.17g},{int(c)}\n")
