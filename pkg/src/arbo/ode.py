"""Fixed-step RK4 integration: forward for states, backward for adjoints.

The forward integrator accepts an optional control trajectory; control
values at RK4 half-steps are linearly interpolated between grid nodes.
The backward integrator uses the standard sweep discretization in which
intermediate-stage state/control values are the average of the two
adjacent grid nodes.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np


class NonFiniteError(ArithmeticError):
    """Integration produced a NaN or infinity.  Carries the step index."""

    def __init__(self, step: int, t: float):
        self.step = step
        self.t = t
        super().__init__(f"non-finite value at step {step} (t = {t:.6g})")


@dataclass(frozen=True)
class TimeGrid:
    """Uniform time grid on [t0, tf] with n_steps intervals."""

    t0: float
    tf: float
    n_steps: int

    def __post_init__(self):
        if self.n_steps < 1:
            raise ValueError(f"n_steps must be >= 1, got {self.n_steps}")
        if not self.tf > self.t0:
            raise ValueError(f"need tf > t0, got [{self.t0}, {self.tf}]")

    @property
    def dt(self) -> float:
        return (self.tf - self.t0) / self.n_steps

    def times(self) -> np.ndarray:
        return self.t0 + self.dt * np.arange(self.n_steps + 1)


@dataclass(frozen=True)
class Trajectory:
    """Per-node vectors (states, adjoints, or controls) on a time grid."""

    grid: TimeGrid
    values: np.ndarray = field(repr=False)  # shape (n_steps+1, dim)

    def __post_init__(self):
        if self.values.shape[0] != self.grid.n_steps + 1:
            raise ValueError(
                f"values has {self.values.shape[0]} rows, grid needs "
                f"{self.grid.n_steps + 1}")

    @property
    def dim(self) -> int:
        return self.values.shape[1]

    def to_csv(self, path, names) -> None:
        """Write t plus one column per component, full round-trip precision."""
        times = self.grid.times()
        with open(path, "w", encoding="utf-8") as f:
            f.write("t," + ",".join(names) + "\n")
            for i, t in enumerate(times):
                row = [f"{t:.17g}"] + [f"{v:.17g}" for v in self.values[i]]
                f.write(",".join(row) + "\n")


def _check_finite(x: np.ndarray, step: int, t: float) -> None:
    if not np.all(np.isfinite(x)):
        raise NonFiniteError(step, t)


def rk4_forward(field, x0, grid: TimeGrid, control_lookup=None) -> Trajectory:
    """Classic RK4 from t0 to tf.

    Without controls, `field(t, x)` is the right-hand side.  With a
    control trajectory (array of shape (n_steps+1, n_controls) or a
    Trajectory), the right-hand side is `field(t, x, u)` and the
    half-step control is the average of the adjacent nodes (linear
    interpolation at the midpoint).
    """
    x0 = np.asarray(x0, dtype=float)
    n = grid.n_steps
    dt = grid.dt
    out = np.empty((n + 1, x0.shape[0]))
    out[0] = x0
    times = grid.times()

    if control_lookup is None:
        x = x0.copy()
        for i in range(n):
            t = times[i]
            k1 = field(t, x)
            k2 = field(t + 0.5 * dt, x + 0.5 * dt * k1)
            k3 = field(t + 0.5 * dt, x + 0.5 * dt * k2)
            k4 = field(t + dt, x + dt * k3)
            x = x + (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
            _check_finite(x, i + 1, times[i + 1])
            out[i + 1] = x
        return Trajectory(grid, out)

    u = control_lookup.values if isinstance(control_lookup, Trajectory) \
        else np.asarray(control_lookup, dtype=float)
    if u.shape[0] != n + 1:
        raise ValueError(f"control trajectory has {u.shape[0]} rows, need {n + 1}")
    x = x0.copy()
    for i in range(n):
        t = times[i]
        u_lo = u[i]
        u_hi = u[i + 1]
        u_mid = 0.5 * (u_lo + u_hi)
        k1 = field(t, x, u_lo)
        k2 = field(t + 0.5 * dt, x + 0.5 * dt * k1, u_mid)
        k3 = field(t + 0.5 * dt, x + 0.5 * dt * k2, u_mid)
        k4 = field(t + dt, x + dt * k3, u_hi)
        x = x + (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
        _check_finite(x, i + 1, times[i + 1])
        out[i + 1] = x
    return Trajectory(grid, out)


def rk4_backward(adjoint_field, terminal_value, grid: TimeGrid,
                 state_traj, control_traj=None) -> Trajectory:
    """RK4 from tf down to t0 for the adjoint system.

    `adjoint_field(t, adj, x, u)` (or `(t, adj, x)` when no controls).
    Intermediate-stage state/control values use the average of the two
    adjacent grid nodes; the terminal node is set to `terminal_value`
    exactly.
    """
    lam = np.asarray(terminal_value, dtype=float).copy()
    n = grid.n_steps
    dt = grid.dt
    xs = state_traj.values if isinstance(state_traj, Trajectory) \
        else np.asarray(state_traj, dtype=float)
    if xs.shape[0] != n + 1:
        raise ValueError(f"state trajectory has {xs.shape[0]} rows, need {n + 1}")
    us = None
    if control_traj is not None:
        us = control_traj.values if isinstance(control_traj, Trajectory) \
            else np.asarray(control_traj, dtype=float)
        if us.shape[0] != n + 1:
            raise ValueError(f"control trajectory has {us.shape[0]} rows, need {n + 1}")

    out = np.empty((n + 1, lam.shape[0]))
    out[n] = lam
    times = grid.times()
    for i in range(n - 1, -1, -1):
        t_hi = times[i + 1]
        x_hi = xs[i + 1]
        x_lo = xs[i]
        x_mid = 0.5 * (x_lo + x_hi)
        if us is None:
            k1 = adjoint_field(t_hi, lam, x_hi)
            k2 = adjoint_field(t_hi - 0.5 * dt, lam - 0.5 * dt * k1, x_mid)
            k3 = adjoint_field(t_hi - 0.5 * dt, lam - 0.5 * dt * k2, x_mid)
            k4 = adjoint_field(t_hi - dt, lam - dt * k3, x_lo)
        else:
            u_hi = us[i + 1]
            u_lo = us[i]
            u_mid = 0.5 * (u_lo + u_hi)
            k1 = adjoint_field(t_hi, lam, x_hi, u_hi)
            k2 = adjoint_field(t_hi - 0.5 * dt, lam - 0.5 * dt * k1, x_mid, u_mid)
            k3 = adjoint_field(t_hi - 0.5 * dt, lam - 0.5 * dt * k2, x_mid, u_mid)
            k4 = adjoint_field(t_hi - dt, lam - dt * k3, x_lo, u_lo)
        lam = lam - (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
        _check_finite(lam, i, times[i])
        out[i] = lam
    return Trajectory(grid, out)
