"""Core arboviral transmission model: parameters, derived constants, and
right-hand sides of the uncontrolled and controlled ODE systems.

State ordering (used everywhere in the package):

    0 S_h   susceptible humans
    1 E_h   latent humans
    2 I_h   infectious humans
    3 R_h   recovered/immune humans
    4 S_v   susceptible adult vectors
    5 E_v   latent adult vectors
    6 I_v   infectious adult vectors
    7 E     eggs
    8 L     larvae
    9 P     pupae
"""

from __future__ import annotations

from dataclasses import dataclass, fields

import numpy as np

# State indices
S_H, E_H, I_H, R_H, S_V, E_V, I_V, EGG, LAR, PUP = range(10)

STATE_NAMES = ("S_h", "E_h", "I_h", "R_h", "S_v", "E_v", "I_v", "E", "L", "P")

N_STATES = 10
N_CONTROLS = 5


class ParamError(ValueError):
    """Raised at construction when parameter bounds are violated.

    Carries the full list of violations so a config error reports
    everything wrong at once.
    """

    def __init__(self, violations):
        self.violations = list(violations)
        super().__init__("invalid parameters: " + "; ".join(self.violations))


class ZeroPopulationError(ValueError):
    """Total human population is zero; forces of infection are undefined."""


@dataclass(frozen=True)
class ModelParams:
    """Biological and demographic rates of the transmission model.

    Rates are per day; carrying capacities are counts.
    """

    lambda_h_in: float  # human recruitment
    mu_h: float         # human natural mortality
    a: float            # bites per vector per day
    beta_hv: float      # transmission probability vector -> human
    beta_vh: float      # transmission probability human -> vector
    gamma_h: float      # latent -> infectious progression, humans
    delta: float        # disease-induced death rate
    sigma: float        # recovery rate
    eta_h: float        # latent-human transmissibility modification
    eta_v: float        # latent-vector transmissibility modification
    mu_v: float         # adult vector mortality
    gamma_v: float      # latent -> infectious progression, vectors
    theta: float        # pupa -> adult maturation
    mu_b: float         # eggs per deposit per day
    Gamma_E: float      # egg carrying capacity
    Gamma_L: float      # larva carrying capacity
    mu_E: float         # egg death rate
    mu_L: float         # larva death rate
    mu_P: float         # pupa death rate
    s: float            # egg -> larva transfer
    l: float            # larva -> pupa transfer

    def __post_init__(self):
        violations = []
        nonneg = ("delta", "eta_h", "eta_v", "beta_hv", "beta_vh")
        positive = [f.name for f in fields(self) if f.name not in nonneg]
        for name in positive:
            if not getattr(self, name) > 0:
                violations.append(f"{name} must be > 0, got {getattr(self, name)!r}")
        for name in ("delta", "beta_hv", "beta_vh"):
            if not getattr(self, name) >= 0:
                violations.append(f"{name} must be >= 0, got {getattr(self, name)!r}")
        for name in ("eta_h", "eta_v"):
            v = getattr(self, name)
            if not (0 <= v < 1):
                violations.append(f"{name} must be in [0, 1), got {v!r}")
        if violations:
            raise ParamError(violations)


@dataclass(frozen=True)
class ControlParams:
    """Efficacy constants attached to the five time-dependent controls."""

    omega: float   # waning immunity of vaccinated recovereds
    alpha1: float  # bite-prevention efficacy
    alpha2: float  # drug efficacy
    c_m: float     # adulticide killing efficacy
    eta1: float    # chemical egg mortality increment
    eta2: float    # chemical larva mortality increment

    def __post_init__(self):
        violations = []
        for name in ("omega", "alpha1", "alpha2", "c_m", "eta1", "eta2"):
            if not getattr(self, name) >= 0:
                violations.append(f"{name} must be >= 0, got {getattr(self, name)!r}")
        for name in ("alpha1", "alpha2"):
            if getattr(self, name) > 1:
                violations.append(f"{name} must be <= 1, got {getattr(self, name)!r}")
        if violations:
            raise ParamError(violations)


@dataclass(frozen=True)
class DerivedConstants:
    """Grouped rate constants k1..k11 (k2 is the composite one)."""

    k1: float
    k2: float
    k3: float
    k4: float
    k5: float
    k6: float
    k7: float
    k8: float
    k9: float
    k10: float
    k11: float


def derive_constants(p: ModelParams) -> DerivedConstants:
    """Compute the grouped rate constants from the raw parameters.

    k2 uses the product form k3*k4 - delta*gamma_h; the equivalent sum
    form mu_h*k4 + gamma_h*(mu_h + sigma) is exercised in tests.
    """
    k3 = p.mu_h + p.gamma_h
    k4 = p.mu_h + p.delta + p.sigma
    return DerivedConstants(
        k1=p.mu_h,
        k2=k3 * k4 - p.delta * p.gamma_h,
        k3=k3,
        k4=k4,
        k5=p.s + p.mu_E,
        k6=p.l + p.mu_L,
        k7=p.theta + p.mu_P,
        k8=p.mu_v,
        k9=p.mu_v + p.gamma_v,
        k10=p.eta_h * k4 + p.gamma_h,
        k11=p.eta_v * p.mu_v + p.gamma_v,
    )


def _human_total(x) -> float:
    n_h = x[S_H] + x[E_H] + x[I_H] + x[R_H]
    if n_h <= 0.0:
        raise ZeroPopulationError("total human population is zero")
    return n_h


def force_of_infection_h(x, p: ModelParams) -> float:
    """Per-susceptible-human infection rate from infected vectors."""
    n_h = _human_total(x)
    return p.a * p.beta_hv * (p.eta_v * x[E_V] + x[I_V]) / n_h


def force_of_infection_v(x, p: ModelParams) -> float:
    """Per-susceptible-vector infection rate from infected humans."""
    n_h = _human_total(x)
    return p.a * p.beta_vh * (p.eta_h * x[E_H] + x[I_H]) / n_h


def basic_field(x, p: ModelParams) -> np.ndarray:
    """Right-hand side of the uncontrolled ten-compartment system."""
    n_h = _human_total(x)
    foi_h = p.a * p.beta_hv * (p.eta_v * x[E_V] + x[I_V]) / n_h
    foi_v = p.a * p.beta_vh * (p.eta_h * x[E_H] + x[I_H]) / n_h
    n_v = x[S_V] + x[E_V] + x[I_V]

    dx = np.empty(N_STATES)
    dx[S_H] = p.lambda_h_in - (foi_h + p.mu_h) * x[S_H]
    dx[E_H] = foi_h * x[S_H] - (p.mu_h + p.gamma_h) * x[E_H]
    dx[I_H] = p.gamma_h * x[E_H] - (p.mu_h + p.delta + p.sigma) * x[I_H]
    dx[R_H] = p.sigma * x[I_H] - p.mu_h * x[R_H]
    dx[S_V] = p.theta * x[PUP] - foi_v * x[S_V] - p.mu_v * x[S_V]
    dx[E_V] = foi_v * x[S_V] - (p.mu_v + p.gamma_v) * x[E_V]
    dx[I_V] = p.gamma_v * x[E_V] - p.mu_v * x[I_V]
    dx[EGG] = p.mu_b * (1.0 - x[EGG] / p.Gamma_E) * n_v - (p.s + p.mu_E) * x[EGG]
    dx[LAR] = p.s * x[EGG] * (1.0 - x[LAR] / p.Gamma_L) - (p.l + p.mu_L) * x[LAR]
    dx[PUP] = p.l * x[LAR] - (p.theta + p.mu_P) * x[PUP]
    return dx


def controlled_field(x, u, p: ModelParams, c: ControlParams) -> np.ndarray:
    """Right-hand side of the controlled system.

    `u` is a length-5 sequence of control intensities in [0, 1].
    With u == 0 this reduces exactly (bitwise) to `basic_field`.
    """
    n_h = _human_total(x)
    foi_h = p.a * p.beta_hv * (p.eta_v * x[E_V] + x[I_V]) / n_h
    foi_v = p.a * p.beta_vh * (p.eta_h * x[E_H] + x[I_H]) / n_h
    n_v = x[S_V] + x[E_V] + x[I_V]
    u1, u2, u3, u4, u5 = u[0], u[1], u[2], u[3], u[4]

    protect = 1.0 - c.alpha1 * u2
    foi_h_c = protect * foi_h
    foi_v_c = protect * foi_v
    mu_v_c = p.mu_v + c.c_m * u4

    dx = np.empty(N_STATES)
    dx[S_H] = (p.lambda_h_in - (foi_h_c + p.mu_h + u1) * x[S_H]
               + c.omega * u1 * x[R_H])
    dx[E_H] = foi_h_c * x[S_H] - (p.mu_h + p.gamma_h) * x[E_H]
    dx[I_H] = (p.gamma_h * x[E_H]
               - (p.mu_h + (1.0 - c.alpha2 * u3) * p.delta + p.sigma + c.alpha2 * u3) * x[I_H])
    dx[R_H] = ((p.sigma + c.alpha2 * u3) * x[I_H] + u1 * x[S_H]
               - (p.mu_h + c.omega * u1) * x[R_H])
    dx[S_V] = p.theta * x[PUP] - foi_v_c * x[S_V] - mu_v_c * x[S_V]
    dx[E_V] = foi_v_c * x[S_V] - (p.mu_v + p.gamma_v + c.c_m * u4) * x[E_V]
    dx[I_V] = p.gamma_v * x[E_V] - mu_v_c * x[I_V]
    dx[EGG] = (p.mu_b * (1.0 - x[EGG] / p.Gamma_E) * n_v
               - (p.s + p.mu_E + c.eta1 * u5) * x[EGG])
    dx[LAR] = (p.s * x[EGG] * (1.0 - x[LAR] / p.Gamma_L)
               - (p.l + p.mu_L + c.eta2 * u5) * x[LAR])
    dx[PUP] = p.l * x[LAR] - (p.theta + p.mu_P) * x[PUP]
    return dx


def params_to_array(p: ModelParams) -> np.ndarray:
    """Flatten params into the fixed order used by the compiled kernels."""
    return np.array([
        p.lambda_h_in, p.mu_h, p.a, p.beta_hv, p.beta_vh, p.gamma_h,
        p.delta, p.sigma, p.eta_h, p.eta_v, p.mu_v, p.gamma_v, p.theta,
        p.mu_b, p.Gamma_E, p.Gamma_L, p.mu_E, p.mu_L, p.mu_P, p.s, p.l,
    ])


def control_params_to_array(c: ControlParams) -> np.ndarray:
    return np.array([c.omega, c.alpha1, c.alpha2, c.c_m, c.eta1, c.eta2])
