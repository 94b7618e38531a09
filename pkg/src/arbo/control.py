"""Optimal-control machinery: objective functional, Hamiltonian, adjoint
system, bang-clamp control characterization with strategy masks, and the
forward-backward sweep iteration."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import _kernels
from .model import (
    E_H, E_V, EGG, I_H, I_V, LAR, N_CONTROLS, PUP, R_H, S_H, S_V,
    ControlParams, ModelParams, ParamError, ZeroPopulationError,
    control_params_to_array, derive_constants, params_to_array,
)
from .ode import TimeGrid, Trajectory


@dataclass(frozen=True)
class ObjectiveWeights:
    """State penalties D1..D4 and quadratic control costs B1..B5."""

    D1: float
    D2: float
    D3: float
    D4: float
    B1: float
    B2: float
    B3: float
    B4: float
    B5: float

    def __post_init__(self):
        bad = [n for n in ("D1", "D2", "D3", "D4", "B1", "B2", "B3", "B4", "B5")
               if not getattr(self, n) > 0]
        if bad:
            raise ParamError([f"{n} must be > 0, got {getattr(self, n)!r}"
                              for n in bad])

    def to_array(self) -> np.ndarray:
        return np.array([self.D1, self.D2, self.D3, self.D4,
                         self.B1, self.B2, self.B3, self.B4, self.B5])


_STRATEGY_SETS = {
    "Z1": (True, True, True, True, False),
    "Z2": (True, True, True, False, True),
    "Z3": (True, False, True, True, True),
    "Z4": (True, True, False, True, True),
    "Z": (True, True, True, True, True),
}


@dataclass(frozen=True)
class StrategyMask:
    """Which of the five controls a strategy may use."""

    name: str
    active: tuple

    def __post_init__(self):
        if len(self.active) != N_CONTROLS:
            raise ValueError(f"need {N_CONTROLS} flags, got {len(self.active)}")
        if self.name in _STRATEGY_SETS and tuple(self.active) != _STRATEGY_SETS[self.name]:
            raise ValueError(
                f"mask {self.active} does not match the definition of {self.name}")

    @classmethod
    def named(cls, name: str) -> "StrategyMask":
        if name not in _STRATEGY_SETS:
            raise ValueError(f"unknown strategy {name!r}; "
                             f"choose from {sorted(_STRATEGY_SETS)}")
        return cls(name=name, active=_STRATEGY_SETS[name])

    @classmethod
    def none(cls) -> "StrategyMask":
        return cls(name="none", active=(False,) * N_CONTROLS)

    def as_array(self) -> np.ndarray:
        return np.array(self.active, dtype=float)


@dataclass(frozen=True)
class AdjointVector:
    """One adjoint value per state compartment (all zero at tf)."""

    adj_Sh: float
    adj_Eh: float
    adj_Ih: float
    adj_Rh: float
    adj_Sv: float
    adj_Ev: float
    adj_Iv: float
    adj_E: float
    adj_L: float
    adj_P: float

    @classmethod
    def from_array(cls, arr) -> "AdjointVector":
        return cls(*[float(a) for a in arr])

    def to_array(self) -> np.ndarray:
        return np.array([self.adj_Sh, self.adj_Eh, self.adj_Ih, self.adj_Rh,
                         self.adj_Sv, self.adj_Ev, self.adj_Iv,
                         self.adj_E, self.adj_L, self.adj_P])


@dataclass(frozen=True)
class SweepResult:
    states: Trajectory
    adjoints: Trajectory
    controls: Trajectory
    objective_j: float
    iterations: int
    converged: bool
    suspect: bool
    log: list = field(repr=False)


class GridMismatchError(ValueError):
    """State and control trajectories live on different grids."""


def running_cost(x, u, w: ObjectiveWeights) -> float:
    n_v = x[S_V] + x[E_V] + x[I_V]
    return (w.D1 * x[I_H] + w.D2 * n_v + w.D3 * x[EGG] + w.D4 * x[LAR]
            + w.B1 * u[0] ** 2 + w.B2 * u[1] ** 2 + w.B3 * u[2] ** 2
            + w.B4 * u[3] ** 2 + w.B5 * u[4] ** 2)


def objective(states: Trajectory, controls: Trajectory,
              w: ObjectiveWeights) -> float:
    """Trapezoidal quadrature of the running cost over the grid."""
    if states.grid != controls.grid:
        raise GridMismatchError(
            f"state grid {states.grid} != control grid {controls.grid}")
    xs = states.values
    us = controls.values
    n_v = xs[:, S_V] + xs[:, E_V] + xs[:, I_V]
    integrand = (w.D1 * xs[:, I_H] + w.D2 * n_v + w.D3 * xs[:, EGG]
                 + w.D4 * xs[:, LAR]
                 + us ** 2 @ np.array([w.B1, w.B2, w.B3, w.B4, w.B5]))
    return float(np.trapezoid(integrand, dx=states.grid.dt))


def hamiltonian(x, u, adj, p: ModelParams, c: ControlParams,
                w: ObjectiveWeights) -> float:
    from .model import controlled_field
    adj = np.asarray(adj, dtype=float)
    return running_cost(x, u, w) + float(adj @ controlled_field(x, u, p, c))


def adjoint_field(x, u, adj, p: ModelParams, c: ControlParams,
                  w: ObjectiveWeights) -> np.ndarray:
    """Right-hand side of the ten adjoint equations (equals -dH/dx)."""
    n_h = x[S_H] + x[E_H] + x[I_H] + x[R_H]
    if n_h <= 0.0:
        raise ZeroPopulationError("total human population is zero")
    k = derive_constants(p)
    l1, l2, l3, l4, l5, l6, l7, l8, l9, l10 = adj
    u1, u2, u3, u4, u5 = u[0], u[1], u[2], u[3], u[4]

    g2 = 1.0 - c.alpha1 * u2
    fh = p.a * p.beta_hv * (p.eta_v * x[E_V] + x[I_V]) / n_h
    fv = p.a * p.beta_vh * (p.eta_h * x[E_H] + x[I_H]) / n_h
    m_v = p.mu_v + c.c_m * u4
    q = g2 * fv * x[S_V] / n_h
    share = g2 * fh * x[S_H] / n_h
    egg_room = p.mu_b * (1.0 - x[EGG] / p.Gamma_E)
    n_v = x[S_V] + x[E_V] + x[I_V]
    treat = c.alpha2 * u3

    d = np.empty(10)
    d[S_H] = ((l1 - l2) * g2 * fh * (1.0 - x[S_H] / n_h)
              + (p.mu_h + u1) * l1 - u1 * l4 + q * (l6 - l5))
    d[E_H] = ((l2 - l1) * share + k.k3 * l2 - p.gamma_h * l3
              + (l5 - l6) * g2 * x[S_V] * (p.a * p.beta_vh * p.eta_h - fv) / n_h)
    d[I_H] = (-w.D1 + (l2 - l1) * share
              + (p.mu_h + (1.0 - treat) * p.delta + p.sigma + treat) * l3
              - (p.sigma + treat) * l4
              + (l5 - l6) * g2 * x[S_V] * (p.a * p.beta_vh - fv) / n_h)
    d[R_H] = ((l2 - l1) * share - c.omega * u1 * l1
              + (p.mu_h + c.omega * u1) * l4 + q * (l6 - l5))
    d[S_V] = -w.D2 + (l5 - l6) * g2 * fv + m_v * l5 - egg_room * l8
    d[E_V] = (-w.D2 + (l1 - l2) * g2 * p.a * p.beta_hv * p.eta_v * x[S_H] / n_h
              + (k.k9 + c.c_m * u4) * l6 - p.gamma_v * l7 - egg_room * l8)
    d[I_V] = (-w.D2 + (l1 - l2) * g2 * p.a * p.beta_hv * x[S_H] / n_h
              + m_v * l7 - egg_room * l8)
    d[EGG] = (-w.D3 + (p.mu_b * n_v / p.Gamma_E + k.k5 + c.eta1 * u5) * l8
              - p.s * (1.0 - x[LAR] / p.Gamma_L) * l9)
    d[LAR] = (-w.D4 + (p.s * x[EGG] / p.Gamma_L + k.k6 + c.eta2 * u5) * l9
              - p.l * l10)
    d[PUP] = -p.theta * l5 + k.k7 * l10
    return d


def characterize_controls(x, adj, p: ModelParams, c: ControlParams,
                          w: ObjectiveWeights, mask: StrategyMask) -> np.ndarray:
    """The five stationary-point controls, clamped to [0,1]; masked-off
    controls are exactly zero."""
    n_h = x[S_H] + x[E_H] + x[I_H] + x[R_H]
    if n_h <= 0.0:
        raise ZeroPopulationError("total human population is zero")
    l1, l2, l3, l4, l5, l6, l7, l8, l9, _ = adj
    fh = p.a * p.beta_hv * (p.eta_v * x[E_V] + x[I_V]) / n_h
    fv = p.a * p.beta_vh * (p.eta_h * x[E_H] + x[I_H]) / n_h

    u = np.empty(N_CONTROLS)
    u[0] = (l1 - l4) * (x[S_H] - c.omega * x[R_H]) / (2.0 * w.B1)
    u[1] = c.alpha1 * (fh * x[S_H] * (l2 - l1)
                       + fv * x[S_V] * (l6 - l5)) / (2.0 * w.B2)
    u[2] = c.alpha2 * ((1.0 - p.delta) * l3 - l4) * x[I_H] / (2.0 * w.B3)
    u[3] = c.c_m * (x[S_V] * l5 + x[E_V] * l6 + x[I_V] * l7) / (2.0 * w.B4)
    u[4] = (c.eta1 * x[EGG] * l8 + c.eta2 * x[LAR] * l9) / (2.0 * w.B5)
    np.clip(u, 0.0, 1.0, out=u)
    return u * mask.as_array()


def _rel_sup_change(new: np.ndarray, old: np.ndarray) -> float:
    return float(np.max(np.abs(new - old)) / max(1.0, np.max(np.abs(new))))


def forward_backward_sweep(p: ModelParams, c: ControlParams,
                           w: ObjectiveWeights, x0, grid: TimeGrid,
                           mask: StrategyMask, mix: float = 0.5,
                           tol: float = 1e-3, max_iters: int = 200,
                           initial_guess=None) -> SweepResult:
    """Iterate forward state / backward adjoint passes, updating the
    controls as a convex combination of the characterization and the
    previous iterate, until the relative control change falls below tol.

    Non-convergence is reported (converged=False) with the full log;
    controls-only convergence with drifting states is flagged suspect.
    """
    if not 0.0 < mix <= 1.0:
        raise ValueError(f"mix must be in (0, 1], got {mix}")
    par = params_to_array(p)
    cpar = control_params_to_array(c)
    wts = w.to_array()
    x0 = np.asarray(x0, dtype=float)
    n = grid.n_steps
    mask_arr = mask.as_array()

    if initial_guess is None:
        u = np.zeros((n + 1, N_CONTROLS))
    else:
        u = np.array(initial_guess, dtype=float)
        if u.shape != (n + 1, N_CONTROLS):
            raise ValueError(f"initial guess shape {u.shape} != {(n + 1, N_CONTROLS)}")
        u = np.clip(u, 0.0, 1.0) * mask_arr

    log = []
    states = None
    adjoints = None
    converged = False
    suspect = False
    prev_states = None
    iterations = 0
    any_active = bool(mask_arr.any())

    for iterations in range(1, max_iters + 1):
        states = _kernels.rk4_controlled(par, cpar, x0, u, grid.dt)
        adjoints = _kernels.rk4_adjoint(par, cpar, wts[:4], states, u, grid.dt)

        u_char = np.empty_like(u)
        for i in range(n + 1):
            u_char[i] = _characterize_raw(states[i], adjoints[i], par, cpar, wts)
        np.clip(u_char, 0.0, 1.0, out=u_char)
        u_char *= mask_arr
        u_new = mix * u_char + (1.0 - mix) * u

        control_change = _rel_sup_change(u_new, u)
        state_change = (_rel_sup_change(states, prev_states)
                        if prev_states is not None else float("inf"))
        j = _objective_arrays(states, u_new, w, grid.dt)
        log.append({"iteration": iterations, "J": j,
                    "control_change": control_change,
                    "state_change": state_change})
        u = u_new
        prev_states = states
        if control_change < tol or not any_active:
            converged = True
            suspect = any_active and state_change >= tol and iterations > 1
            break

    states = _kernels.rk4_controlled(par, cpar, x0, u, grid.dt)
    adjoints = _kernels.rk4_adjoint(par, cpar, wts[:4], states, u, grid.dt)
    j = _objective_arrays(states, u, w, grid.dt)

    return SweepResult(
        states=Trajectory(grid, states),
        adjoints=Trajectory(grid, adjoints),
        controls=Trajectory(grid, u),
        objective_j=j,
        iterations=iterations,
        converged=converged,
        suspect=suspect,
        log=log)


def _objective_arrays(xs, us, w: ObjectiveWeights, dt: float) -> float:
    n_v = xs[:, S_V] + xs[:, E_V] + xs[:, I_V]
    integrand = (w.D1 * xs[:, I_H] + w.D2 * n_v + w.D3 * xs[:, EGG]
                 + w.D4 * xs[:, LAR]
                 + us ** 2 @ np.array([w.B1, w.B2, w.B3, w.B4, w.B5]))
    return float(np.trapezoid(integrand, dx=dt))


def _characterize_raw(x, adj, par, cpar, wts) -> np.ndarray:
    """Unclamped characterization on raw arrays (hot path of the sweep)."""
    n_h = x[S_H] + x[E_H] + x[I_H] + x[R_H]
    a, beta_hv, beta_vh = par[2], par[3], par[4]
    delta, eta_h, eta_v = par[6], par[8], par[9]
    omega, alpha1, alpha2, c_m, eta1, eta2 = cpar
    b1, b2, b3, b4, b5 = wts[4:]
    l1, l2, l3, l4, l5, l6, l7, l8, l9, _ = adj
    fh = a * beta_hv * (eta_v * x[E_V] + x[I_V]) / n_h
    fv = a * beta_vh * (eta_h * x[E_H] + x[I_H]) / n_h
    return np.array([
        (l1 - l4) * (x[S_H] - omega * x[R_H]) / (2.0 * b1),
        alpha1 * (fh * x[S_H] * (l2 - l1) + fv * x[S_V] * (l6 - l5)) / (2.0 * b2),
        alpha2 * ((1.0 - delta) * l3 - l4) * x[I_H] / (2.0 * b3),
        c_m * (x[S_V] * l5 + x[E_V] * l6 + x[I_V] * l7) / (2.0 * b4),
        (eta1 * x[EGG] * l8 + eta2 * x[LAR] * l9) / (2.0 * b5),
    ])


def controls_to_csv(result: SweepResult, path) -> None:
    result.controls.to_csv(path, ["u1", "u2", "u3", "u4", "u5"])
