"""Pure-Python RK4 kernels, used when the compiled extension is absent.

These mirror the compiled kernels operation-for-operation; both consume
the flat parameter arrays produced by `model.params_to_array` /
`model.control_params_to_array`.
"""

from __future__ import annotations

import numpy as np

BACKEND = "python"

# Flat parameter-array indices (order of model.params_to_array).
(_LAM, _MUH, _A, _BHV, _BVH, _GAMH, _DELTA, _SIGMA, _ETAH, _ETAV,
 _MUV, _GAMV, _THETA, _MUB, _GE, _GL, _MUE, _MUL, _MUP, _S, _L) = range(21)


def _basic_rhs(x, par):
    n_h = x[0] + x[1] + x[2] + x[3]
    foi_h = par[_A] * par[_BHV] * (par[_ETAV] * x[5] + x[6]) / n_h
    foi_v = par[_A] * par[_BVH] * (par[_ETAH] * x[1] + x[2]) / n_h
    n_v = x[4] + x[5] + x[6]
    dx = np.empty(10)
    dx[0] = par[_LAM] - (foi_h + par[_MUH]) * x[0]
    dx[1] = foi_h * x[0] - (par[_MUH] + par[_GAMH]) * x[1]
    dx[2] = par[_GAMH] * x[1] - (par[_MUH] + par[_DELTA] + par[_SIGMA]) * x[2]
    dx[3] = par[_SIGMA] * x[2] - par[_MUH] * x[3]
    dx[4] = par[_THETA] * x[9] - foi_v * x[4] - par[_MUV] * x[4]
    dx[5] = foi_v * x[4] - (par[_MUV] + par[_GAMV]) * x[5]
    dx[6] = par[_GAMV] * x[5] - par[_MUV] * x[6]
    dx[7] = par[_MUB] * (1.0 - x[7] / par[_GE]) * n_v - (par[_S] + par[_MUE]) * x[7]
    dx[8] = par[_S] * x[7] * (1.0 - x[8] / par[_GL]) - (par[_L] + par[_MUL]) * x[8]
    dx[9] = par[_L] * x[8] - (par[_THETA] + par[_MUP]) * x[9]
    return dx


def _controlled_rhs(x, u, par, cpar):
    n_h = x[0] + x[1] + x[2] + x[3]
    foi_h = par[_A] * par[_BHV] * (par[_ETAV] * x[5] + x[6]) / n_h
    foi_v = par[_A] * par[_BVH] * (par[_ETAH] * x[1] + x[2]) / n_h
    n_v = x[4] + x[5] + x[6]
    omega, alpha1, alpha2, c_m, eta1, eta2 = cpar
    u1, u2, u3, u4, u5 = u
    protect = 1.0 - alpha1 * u2
    foi_h_c = protect * foi_h
    foi_v_c = protect * foi_v
    mu_v_c = par[_MUV] + c_m * u4
    dx = np.empty(10)
    dx[0] = (par[_LAM] - (foi_h_c + par[_MUH] + u1) * x[0]
             + omega * u1 * x[3])
    dx[1] = foi_h_c * x[0] - (par[_MUH] + par[_GAMH]) * x[1]
    dx[2] = (par[_GAMH] * x[1]
             - (par[_MUH] + (1.0 - alpha2 * u3) * par[_DELTA]
                + par[_SIGMA] + alpha2 * u3) * x[2])
    dx[3] = ((par[_SIGMA] + alpha2 * u3) * x[2] + u1 * x[0]
             - (par[_MUH] + omega * u1) * x[3])
    dx[4] = par[_THETA] * x[9] - foi_v_c * x[4] - mu_v_c * x[4]
    dx[5] = foi_v_c * x[4] - (par[_MUV] + par[_GAMV] + c_m * u4) * x[5]
    dx[6] = par[_GAMV] * x[5] - mu_v_c * x[6]
    dx[7] = (par[_MUB] * (1.0 - x[7] / par[_GE]) * n_v
             - (par[_S] + par[_MUE] + eta1 * u5) * x[7])
    dx[8] = (par[_S] * x[7] * (1.0 - x[8] / par[_GL])
             - (par[_L] + par[_MUL] + eta2 * u5) * x[8])
    dx[9] = par[_L] * x[8] - (par[_THETA] + par[_MUP]) * x[9]
    return dx


def _adjoint_rhs(lam, x, u, par, cpar, dwts):
    n_h = x[0] + x[1] + x[2] + x[3]
    omega, alpha1, alpha2, c_m, eta1, eta2 = cpar
    u1, u2, u3, u4, u5 = u
    d1, d2w, d3, d4 = dwts
    l1, l2, l3, l4, l5, l6, l7, l8, l9, l10 = lam
    k3 = par[_MUH] + par[_GAMH]
    k5 = par[_S] + par[_MUE]
    k6 = par[_L] + par[_MUL]
    k7 = par[_THETA] + par[_MUP]
    k9 = par[_MUV] + par[_GAMV]
    g2 = 1.0 - alpha1 * u2
    fh = par[_A] * par[_BHV] * (par[_ETAV] * x[5] + x[6]) / n_h
    fv = par[_A] * par[_BVH] * (par[_ETAH] * x[1] + x[2]) / n_h
    m_v = par[_MUV] + c_m * u4
    q = g2 * fv * x[4] / n_h
    share = g2 * fh * x[0] / n_h
    egg_room = par[_MUB] * (1.0 - x[7] / par[_GE])
    n_v = x[4] + x[5] + x[6]
    treat = alpha2 * u3
    d = np.empty(10)
    d[0] = ((l1 - l2) * g2 * fh * (1.0 - x[0] / n_h)
            + (par[_MUH] + u1) * l1 - u1 * l4 + q * (l6 - l5))
    d[1] = ((l2 - l1) * share + k3 * l2 - par[_GAMH] * l3
            + (l5 - l6) * g2 * x[4] * (par[_A] * par[_BVH] * par[_ETAH] - fv) / n_h)
    d[2] = (-d1 + (l2 - l1) * share
            + (par[_MUH] + (1.0 - treat) * par[_DELTA] + par[_SIGMA] + treat) * l3
            - (par[_SIGMA] + treat) * l4
            + (l5 - l6) * g2 * x[4] * (par[_A] * par[_BVH] - fv) / n_h)
    d[3] = ((l2 - l1) * share - omega * u1 * l1
            + (par[_MUH] + omega * u1) * l4 + q * (l6 - l5))
    d[4] = -d2w + (l5 - l6) * g2 * fv + m_v * l5 - egg_room * l8
    d[5] = (-d2w + (l1 - l2) * g2 * par[_A] * par[_BHV] * par[_ETAV] * x[0] / n_h
            + (k9 + c_m * u4) * l6 - par[_GAMV] * l7 - egg_room * l8)
    d[6] = (-d2w + (l1 - l2) * g2 * par[_A] * par[_BHV] * x[0] / n_h
            + m_v * l7 - egg_room * l8)
    d[7] = (-d3 + (par[_MUB] * n_v / par[_GE] + k5 + eta1 * u5) * l8
            - par[_S] * (1.0 - x[8] / par[_GL]) * l9)
    d[8] = (-d4 + (par[_S] * x[7] / par[_GL] + k6 + eta2 * u5) * l9
            - par[_L] * l10)
    d[9] = -par[_THETA] * l5 + k7 * l10
    return d


def rk4_basic(par, x0, n_steps, dt):
    """Uncontrolled forward RK4; returns the (n_steps+1, 10) trajectory."""
    out = np.empty((n_steps + 1, 10))
    x = np.array(x0, dtype=float)
    out[0] = x
    for i in range(n_steps):
        k1 = _basic_rhs(x, par)
        k2 = _basic_rhs(x + 0.5 * dt * k1, par)
        k3 = _basic_rhs(x + 0.5 * dt * k2, par)
        k4 = _basic_rhs(x + dt * k3, par)
        x = x + (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
        out[i + 1] = x
    return out


def rk4_controlled(par, cpar, x0, u, dt):
    """Controlled forward RK4 with node controls u of shape (n+1, 5);
    half-step controls are the average of the adjacent nodes."""
    n_steps = u.shape[0] - 1
    out = np.empty((n_steps + 1, 10))
    x = np.array(x0, dtype=float)
    out[0] = x
    for i in range(n_steps):
        u_lo = u[i]
        u_hi = u[i + 1]
        u_mid = 0.5 * (u_lo + u_hi)
        k1 = _controlled_rhs(x, u_lo, par, cpar)
        k2 = _controlled_rhs(x + 0.5 * dt * k1, u_mid, par, cpar)
        k3 = _controlled_rhs(x + 0.5 * dt * k2, u_mid, par, cpar)
        k4 = _controlled_rhs(x + dt * k3, u_hi, par, cpar)
        x = x + (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
        out[i + 1] = x
    return out


def rk4_adjoint(par, cpar, dwts, states, u, dt):
    """Backward RK4 for the adjoint system with zero terminal value;
    intermediate-stage states/controls average the adjacent nodes."""
    n_steps = states.shape[0] - 1
    out = np.empty((n_steps + 1, 10))
    lam = np.zeros(10)
    out[n_steps] = lam
    for i in range(n_steps - 1, -1, -1):
        x_hi = states[i + 1]
        x_lo = states[i]
        x_mid = 0.5 * (x_lo + x_hi)
        u_hi = u[i + 1]
        u_lo = u[i]
        u_mid = 0.5 * (u_lo + u_hi)
        k1 = _adjoint_rhs(lam, x_hi, u_hi, par, cpar, dwts)
        k2 = _adjoint_rhs(lam - 0.5 * dt * k1, x_mid, u_mid, par, cpar, dwts)
        k3 = _adjoint_rhs(lam - 0.5 * dt * k2, x_mid, u_mid, par, cpar, dwts)
        k4 = _adjoint_rhs(lam - dt * k3, x_lo, u_lo, par, cpar, dwts)
        lam = lam - (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
        out[i] = lam
    return out
