"""Closed-form epidemic thresholds and bifurcation boundary values."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .model import (
    E_H, E_V, EGG, I_H, I_V, LAR, PUP, R_H, S_H, S_V,
    DerivedConstants, ModelParams, derive_constants,
)


class ThresholdError(ValueError):
    """A quantity was requested outside the parameter region where it exists."""


@dataclass(frozen=True)
class ThresholdReport:
    """All scalar thresholds of the model for one parameter set.

    Quantities that only exist in part of parameter space (R_1b, R_2b,
    beta_minus, beta_plus) are None when absent.  `r0_defined` is False
    when the vector population does not establish (N <= 1); R0 is then
    reported as 0 by convention.
    """

    net_repro: float
    r0: float
    r0_defined: bool
    k_vh: float
    k_hv: float
    r_c: float
    r_1b: float | None
    r_2b: float | None
    psi: float
    beta_star: float
    beta_bar: float
    beta_minus: float | None
    beta_plus: float | None


def net_reproductive_number(p: ModelParams) -> float:
    """Vector-population persistence threshold: mosquitoes establish iff > 1."""
    k = derive_constants(p)
    return p.mu_b * p.theta * p.l * p.s / (k.k5 * k.k6 * k.k7 * k.k8)


def dfe_components(p: ModelParams, trivial: bool = False) -> np.ndarray:
    """Disease-free equilibrium as a state vector.

    With `trivial=True` returns the vector-free equilibrium (humans only).
    Otherwise returns the biological DFE with the vector population at its
    persistence level, which requires net reproductive number > 1.
    """
    x = np.zeros(10)
    x[S_H] = p.lambda_h_in / p.mu_h
    if trivial:
        return x
    n = net_reproductive_number(p)
    if n <= 1.0:
        raise ThresholdError(
            f"biological DFE requires net reproductive number > 1, got {n:.6g}")
    k = derive_constants(p)
    denom = p.mu_b * (p.Gamma_E * p.s + k.k6 * p.Gamma_L)
    x[S_V] = p.Gamma_E * p.Gamma_L * k.k5 * k.k6 * (n - 1.0) / denom
    x[PUP] = p.Gamma_E * p.Gamma_L * k.k5 * k.k6 * k.k8 * (n - 1.0) / (p.theta * denom)
    x[LAR] = (p.Gamma_E * p.Gamma_L * k.k5 * k.k6 * k.k7 * k.k8 * (n - 1.0)
              / (p.theta * p.l * denom))
    x[EGG] = (p.Gamma_E * p.Gamma_L * k.k5 * k.k6 * k.k7 * k.k8 * (n - 1.0)
              / (p.s * (p.mu_b * p.l * p.Gamma_L * p.theta + k.k5 * k.k7 * k.k8 * p.Gamma_E)))
    return x


def infection_generation_factors(p: ModelParams) -> tuple[float, float]:
    """(K_vh, K_hv): vectors infected per human and humans infected per vector
    near the biological DFE.  R0 is their geometric mean."""
    n = net_reproductive_number(p)
    if n <= 1.0:
        raise ThresholdError(
            f"infection generation factors require net reproductive number > 1, got {n:.6g}")
    k = derive_constants(p)
    dfe = dfe_components(p)
    nv0 = dfe[S_V]
    nh0 = dfe[S_H]
    k_vh = p.a * p.beta_vh * (p.gamma_h + k.k4 * p.eta_h) * nv0 / (k.k3 * k.k4 * nh0)
    k_hv = p.a * p.beta_hv * (p.gamma_v + k.k8 * p.eta_v) / (k.k8 * k.k9)
    return k_vh, k_hv


def basic_reproduction_number(p: ModelParams) -> float:
    """Closed-form R0; requires an established vector population (N > 1)."""
    k_vh, k_hv = infection_generation_factors(p)
    return math.sqrt(k_vh * k_hv)


def next_generation_matrices(p: ModelParams) -> tuple[np.ndarray, np.ndarray]:
    """New-infection and transfer matrices (F, V) for the four infected
    compartments (E_h, I_h, E_v, I_v) at the biological DFE."""
    k = derive_constants(p)
    dfe = dfe_components(p)
    nv0, nh0 = dfe[S_V], dfe[S_H]
    f = np.array([
        [0.0, 0.0, p.a * p.beta_hv * p.eta_v, p.a * p.beta_hv],
        [0.0, 0.0, 0.0, 0.0],
        [p.a * p.beta_vh * p.eta_h * nv0 / nh0, p.a * p.beta_vh * nv0 / nh0, 0.0, 0.0],
        [0.0, 0.0, 0.0, 0.0],
    ])
    v = np.array([
        [k.k3, 0.0, 0.0, 0.0],
        [-p.gamma_h, k.k4, 0.0, 0.0],
        [0.0, 0.0, k.k9, 0.0],
        [0.0, 0.0, -p.gamma_v, k.k8],
    ])
    return f, v


def _beta_star(p: ModelParams, k: DerivedConstants, nh0: float, nv0: float) -> float:
    return (k.k3 * k.k4 * k.k8 * k.k9 * nh0
            / (p.a ** 2 * p.beta_vh * k.k10 * k.k11 * nv0))


def bifurcation_thresholds(p: ModelParams) -> ThresholdReport:
    """Full threshold report: R0, R_c, the saddle-node bounds in both the
    R0 scale (R_1b, R_2b) and the beta_hv scale (beta_bar, beta_minus,
    beta_plus), and the transcritical value beta_star."""
    k = derive_constants(p)
    n = net_reproductive_number(p)

    psi = k.k10 * p.a * p.mu_h * p.beta_vh - p.delta * p.gamma_h * k.k8
    r_c = math.sqrt((2.0 * k.k8 * k.k2 + k.k10 * p.a * p.mu_h * p.beta_vh)
                    / (k.k3 * k.k4 * k.k8))

    r_1b = r_2b = None
    if psi <= 0.0:
        root_a = math.sqrt(p.delta * p.gamma_h
                           * (p.a * p.mu_h * p.beta_vh * k.k10 + k.k2 * k.k8))
        root_b = math.sqrt(-k.k2 * psi)
        scale = 1.0 / (k.k3 * k.k4) * math.sqrt(1.0 / k.k8)
        r_1b = scale * abs(root_a - root_b)
        r_2b = scale * (root_a + root_b)

    if n <= 1.0:
        return ThresholdReport(
            net_repro=n, r0=0.0, r0_defined=False, k_vh=0.0, k_hv=0.0,
            r_c=r_c, r_1b=r_1b, r_2b=r_2b, psi=psi,
            beta_star=math.nan, beta_bar=math.nan,
            beta_minus=None, beta_plus=None)

    k_vh, k_hv = infection_generation_factors(p)
    r0 = math.sqrt(k_vh * k_hv)
    dfe = dfe_components(p)
    nh0, nv0 = dfe[S_H], dfe[S_V]

    beta_star = _beta_star(p, k, nh0, nv0)
    beta_bar = ((p.a * p.mu_h * p.beta_vh * k.k10 + 2.0 * k.k2 * k.k8) * nh0
                / (p.a ** 2 * p.beta_vh * k.k10 * k.k11 * nv0))

    beta_minus = beta_plus = None
    if psi < 0.0:
        root_a = math.sqrt(p.delta * p.gamma_h
                           * (p.a * p.mu_h * p.beta_vh * k.k10 + k.k2 * k.k8))
        root_b = math.sqrt(-k.k2 * psi)
        scale = k.k9 * nh0 / (k.k3 * k.k4 * k.k10 * k.k11 * p.a ** 2 * nv0 * p.beta_vh)
        beta_minus = scale * (root_a - root_b) ** 2
        beta_plus = scale * (root_a + root_b) ** 2

    return ThresholdReport(
        net_repro=n, r0=r0, r0_defined=True, k_vh=k_vh, k_hv=k_hv,
        r_c=r_c, r_1b=r_1b, r_2b=r_2b, psi=psi,
        beta_star=beta_star, beta_bar=beta_bar,
        beta_minus=beta_minus, beta_plus=beta_plus)
