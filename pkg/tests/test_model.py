"""Parameter validation, derived constants, and the two vector fields."""

import dataclasses

import numpy as np
import pytest

from arbo.model import (
    E_H, E_V, I_H, I_V, S_H, S_V,
    ControlParams, ModelParams, ParamError, ZeroPopulationError,
    basic_field, control_params_to_array, controlled_field, derive_constants,
    force_of_infection_h, force_of_infection_v, params_to_array,
)
from arbo.sensitivity import PARAM_ORDER
from arbo.thresholds import dfe_components
from conftest import random_params


def test_derived_constants_table5(table5):
    """[DERIVED] Hand arithmetic for the field-study aquatic rates."""
    k = derive_constants(table5.params)
    assert k.k5 == pytest.approx(0.9)
    assert k.k6 == pytest.approx(0.9)
    assert k.k7 == pytest.approx(0.48)
    assert k.k8 == pytest.approx(1.0 / 30.0)


def test_k2_product_and_sum_forms_agree():
    """[TRIVIAL] k3*k4 - delta*gamma_h == mu_h*k4 + gamma_h*(mu_h + sigma)."""
    rng = np.random.default_rng(0)
    for _ in range(50):
        p = random_params(rng)
        k = derive_constants(p)
        alt = p.mu_h * k.k4 + p.gamma_h * (p.mu_h + p.sigma)
        assert k.k2 == pytest.approx(alt, rel=1e-12)


def test_degenerate_rates():
    """[TRIVIAL] delta = sigma -> 0 collapses k4 toward mu_h + sigma."""
    rng = np.random.default_rng(1)
    p = random_params(rng, delta=0.0)
    k = derive_constants(p)
    assert k.k4 == pytest.approx(p.mu_h + p.sigma)
    assert k.k2 == pytest.approx(k.k3 * k.k4)


def test_force_of_infection_trivial_cases(table5):
    """[TRIVIAL] No infected vectors/humans -> zero force of infection."""
    x = np.zeros(10)
    x[S_H] = 1000.0
    assert force_of_infection_h(x, table5.params) == 0.0
    assert force_of_infection_v(x, table5.params) == 0.0


def test_force_of_infection_unit_normalization():
    """[TRIVIAL] a = beta_hv = 1, I_v = N_h, eta_v = 0 -> rate 1."""
    rng = np.random.default_rng(2)
    p = random_params(rng, a=1.0, beta_hv=1.0, eta_v=0.0)
    x = np.zeros(10)
    x[S_H] = 250.0
    x[I_V] = 250.0
    assert force_of_infection_h(x, p) == pytest.approx(1.0)


def test_zero_population_raises(table5):
    """[TRIVIAL] Empty human population is rejected, not divided by."""
    with pytest.raises(ZeroPopulationError):
        basic_field(np.zeros(10), table5.params)


def test_basic_field_vanishes_at_equilibria(table5):
    """[DERIVED] Both disease-free points are exact roots of the field."""
    p = table5.params
    trivial = dfe_components(p, trivial=True)
    assert np.all(basic_field(trivial, p) == 0.0)
    biological = dfe_components(p)
    residual = np.max(np.abs(basic_field(biological, p)))
    assert residual <= 1e-9 * np.max(np.abs(biological))


def test_controlled_field_reduces_to_basic(table5):
    """[TRIVIAL] u = 0 reproduces the uncontrolled field bitwise."""
    rng = np.random.default_rng(3)
    x = rng.uniform(1.0, 1e4, 10)
    out_basic = basic_field(x, table5.params)
    out_ctrl = controlled_field(x, np.zeros(5), table5.params,
                                table5.control_params)
    assert np.all(out_basic == out_ctrl)


def test_total_protection_blocks_transmission(table5):
    """[TRIVIAL] u2 = 1 with full efficacy removes both infection inflows."""
    c = dataclasses.replace(table5.control_params, alpha1=1.0)
    rng = np.random.default_rng(4)
    x = rng.uniform(1.0, 1e4, 10)
    u = np.array([0.0, 1.0, 0.0, 0.0, 0.0])
    dx = controlled_field(x, u, table5.params, c)
    k = derive_constants(table5.params)
    assert dx[E_H] == pytest.approx(-k.k3 * x[E_H], rel=1e-12)
    assert dx[E_V] == pytest.approx(-k.k9 * x[E_V], rel=1e-12)


def test_param_validation_collects_all_violations(table5):
    """[TRIVIAL] Every bound violation is reported at once."""
    values = dataclasses.asdict(table5.params)
    values.update(mu_h=-1.0, eta_h=1.5, beta_hv=-0.2)
    with pytest.raises(ParamError) as err:
        ModelParams(**values)
    text = str(err.value)
    assert "mu_h" in text and "eta_h" in text and "beta_hv" in text
    assert len(err.value.violations) == 3


def test_boundary_values_allowed(table5):
    """[TRIVIAL] Zero transmission and zero disease mortality are legal."""
    values = dataclasses.asdict(table5.params)
    values.update(beta_hv=0.0, beta_vh=0.0, delta=0.0, eta_h=0.0, eta_v=0.0)
    ModelParams(**values)  # must not raise


def test_control_params_validation():
    """[TRIVIAL] Efficacies above 1 and negative rates are rejected."""
    with pytest.raises(ParamError):
        ControlParams(omega=0.05, alpha1=1.5, alpha2=0.5, c_m=0.2,
                      eta1=0.001, eta2=0.3)
    with pytest.raises(ParamError):
        ControlParams(omega=-0.05, alpha1=0.5, alpha2=0.5, c_m=0.2,
                      eta1=0.001, eta2=0.3)


def test_params_to_array_order(table5):
    """[TRIVIAL] The kernel flattening follows the documented order."""
    arr = params_to_array(table5.params)
    for i, name in enumerate(PARAM_ORDER):
        assert arr[i] == getattr(table5.params, name)
    carr = control_params_to_array(table5.control_params)
    assert carr.tolist() == [table5.control_params.omega,
                             table5.control_params.alpha1,
                             table5.control_params.alpha2,
                             table5.control_params.c_m,
                             table5.control_params.eta1,
                             table5.control_params.eta2]
