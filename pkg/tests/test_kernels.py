"""Compiled and pure-Python integration kernels must agree."""

import numpy as np
import pytest

from arbo import _kernels
from arbo._kernels import fallback
from arbo.control import adjoint_field
from arbo.model import (
    ControlParams, ModelParams, basic_field, control_params_to_array,
    controlled_field, params_to_array,
)
from arbo.ode import TimeGrid, rk4_backward, rk4_forward


def test_backend_identifies_itself():
    """[TRIVIAL] The selected backend is one of the two known ones."""
    assert _kernels.BACKEND in ("cython", "python")
    assert fallback.BACKEND == "python"


def _random_controls(rng, n):
    return rng.uniform(0.0, 1.0, (n + 1, 5))


def test_basic_kernels_agree(table5):
    """[DERIVED] Compiled and fallback forward integrations match."""
    par = params_to_array(table5.params)
    traj_a = _kernels.rk4_basic(par, table5.x0, 200, 0.05)
    traj_b = fallback.rk4_basic(par, table5.x0, 200, 0.05)
    assert np.allclose(traj_a, traj_b, rtol=1e-12, atol=1e-9)


def test_controlled_kernels_agree(table5):
    """[DERIVED] Same for the controlled system with random controls."""
    rng = np.random.default_rng(21)
    par = params_to_array(table5.params)
    cpar = control_params_to_array(table5.control_params)
    u = _random_controls(rng, 200)
    traj_a = _kernels.rk4_controlled(par, cpar, table5.x0, u, 0.05)
    traj_b = fallback.rk4_controlled(par, cpar, table5.x0, u, 0.05)
    assert np.allclose(traj_a, traj_b, rtol=1e-12, atol=1e-9)


def test_adjoint_kernels_agree(table5):
    """[DERIVED] Same for the backward adjoint integration."""
    rng = np.random.default_rng(22)
    par = params_to_array(table5.params)
    cpar = control_params_to_array(table5.control_params)
    u = _random_controls(rng, 200)
    states = _kernels.rk4_controlled(par, cpar, table5.x0, u, 0.05)
    dwts = table5.weights.to_array()[:4]
    adj_a = _kernels.rk4_adjoint(par, cpar, dwts, states, u, 0.05)
    adj_b = fallback.rk4_adjoint(par, cpar, dwts, states, u, 0.05)
    assert np.allclose(adj_a, adj_b, rtol=1e-12, atol=1e-9)


def test_basic_kernel_matches_reference_integrator(table5):
    """[DERIVED] Kernels reproduce the generic RK4 driven by the
    Python right-hand side."""
    p = table5.params
    grid = TimeGrid(0.0, 10.0, 200)
    ref = rk4_forward(lambda t, x: basic_field(x, p), table5.x0, grid)
    ker = _kernels.rk4_basic(params_to_array(p), table5.x0,
                             grid.n_steps, grid.dt)
    assert np.allclose(ker, ref.values, rtol=1e-10, atol=1e-8)


def test_controlled_kernel_matches_reference_integrator(table5):
    """[DERIVED] Controlled kernel against the generic integrator with
    midpoint-averaged controls."""
    p, c = table5.params, table5.control_params
    rng = np.random.default_rng(23)
    grid = TimeGrid(0.0, 10.0, 200)
    u = _random_controls(rng, grid.n_steps)
    ref = rk4_forward(lambda t, x, uu: controlled_field(x, uu, p, c),
                      table5.x0, grid, control_lookup=u)
    ker = _kernels.rk4_controlled(params_to_array(p),
                                  control_params_to_array(c),
                                  table5.x0, u, grid.dt)
    assert np.allclose(ker, ref.values, rtol=1e-10, atol=1e-8)


def test_adjoint_kernel_matches_reference_integrator(table5):
    """[DERIVED] Adjoint kernel against the generic backward integrator
    driven by the closed-form adjoint field."""
    p, c, w = table5.params, table5.control_params, table5.weights
    rng = np.random.default_rng(24)
    grid = TimeGrid(0.0, 10.0, 200)
    u = _random_controls(rng, grid.n_steps)
    par = params_to_array(p)
    cpar = control_params_to_array(c)
    states = _kernels.rk4_controlled(par, cpar, table5.x0, u, grid.dt)
    ker = _kernels.rk4_adjoint(par, cpar, w.to_array()[:4], states, u, grid.dt)
    ref = rk4_backward(
        lambda t, lam, x, uu: adjoint_field(x, uu, lam, p, c, w),
        np.zeros(10), grid, states, control_traj=u)
    assert np.allclose(ker, ref.values, rtol=1e-9, atol=1e-6)
