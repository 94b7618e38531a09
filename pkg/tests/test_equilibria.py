"""Endemic quadratic, back-substitution, classification, and scans."""

import dataclasses

import numpy as np
import pytest

from arbo.equilibria import (
    Classification, bifurcation_scan, delta_zero_check, endemic_quadratic,
    solve_endemic,
)
from arbo.model import E_H, I_H, PUP, S_H, S_V, basic_field, derive_constants
from arbo.stability import eigen_verdict
from arbo.thresholds import (
    ThresholdError, bifurcation_thresholds, net_reproductive_number,
)
from conftest import random_established_params


def test_quadratic_requires_vectors(table5):
    """[TRIVIAL] No established vector population, no endemic quadratic."""
    p = dataclasses.replace(table5.params, mu_b=0.1)
    with pytest.raises(ThresholdError):
        endemic_quadratic(p)


def test_d0_sign_tracks_r0():
    """[TRIVIAL] d0 is a positive multiple of R0^2 - 1."""
    rng = np.random.default_rng(8)
    for _ in range(50):
        p = random_established_params(rng)
        rep = bifurcation_thresholds(p)
        q = endemic_quadratic(p)
        assert (q.d0 > 0) == (rep.r0 > 1.0)


def test_d0_vanishes_at_transcritical(sec22):
    """[TRIVIAL] beta_hv = beta* makes the constant coefficient zero."""
    rep = bifurcation_thresholds(sec22.params)
    p = dataclasses.replace(sec22.params, beta_hv=rep.beta_star)
    q = endemic_quadratic(p)
    assert abs(q.d0) <= 1e-12 * abs(q.d1)


def test_d1_sign_tracks_r0_vs_rc():
    """[TRIVIAL] d1 factors through R0^2 - R_c^2."""
    rng = np.random.default_rng(9)
    for _ in range(50):
        p = random_established_params(rng)
        rep = bifurcation_thresholds(p)
        q = endemic_quadratic(p)
        assert (q.d1 > 0) == (rep.r0 > rep.r_c)


def test_no_endemic_without_transmission(table5):
    """[TRIVIAL] beta_hv = 0 leaves only the disease-free points."""
    p = dataclasses.replace(table5.params, beta_hv=0.0)
    eq = solve_endemic(p)
    assert eq.classification is Classification.NO_ENDEMIC
    assert eq.endemic == []


def test_unique_endemic_supercritical(table5):
    """[DERIVED] R0 > 1 yields one endemic point satisfying the
    closed-form equilibrium identities."""
    p = table5.params
    eq = solve_endemic(p, stability_checker=lambda x: eigen_verdict(x, p).stable)
    assert eq.classification is Classification.UNIQUE
    assert eq.case == "i"
    assert len(eq.endemic) == 1
    x, lam, stable = eq.endemic[0]
    k = derive_constants(p)
    # Force-of-infection identity and vector balance.
    assert lam == pytest.approx(k.k3 * x[E_H] / x[S_H], rel=1e-9)
    n_h = x[:4].sum()
    lam_v = p.a * p.beta_vh * (p.eta_h * x[E_H] + x[I_H]) / n_h
    assert x[S_V] == pytest.approx(p.theta * x[PUP] / (lam_v + k.k8), rel=1e-9)
    assert stable is True
    residual = np.max(np.abs(basic_field(x, p)))
    assert residual <= 1e-8 * max(1.0, np.max(np.abs(x)))


def test_two_endemic_window(sec22):
    """[DERIVED] Inside the saddle-node window the quadratic yields a
    stable/unstable pair, the lower branch unstable."""
    p = dataclasses.replace(sec22.params, beta_hv=0.1)
    eq = solve_endemic(p, stability_checker=lambda x: eigen_verdict(x, p).stable)
    assert eq.classification is Classification.TWO
    assert eq.case == "iii-a"
    assert len(eq.endemic) == 2
    (x_lo, lam_lo, stable_lo), (x_hi, lam_hi, stable_hi) = eq.endemic
    assert lam_lo < lam_hi
    assert stable_lo is False and stable_hi is True
    assert x_lo[I_H] < x_hi[I_H]


def test_classification_subcritical_outside_window(sec22):
    """[DERIVED] Below the window: subcritical R0 with no endemic point."""
    eq = solve_endemic(sec22.params)
    assert eq.classification is Classification.NO_ENDEMIC
    assert eq.case == "iii-c"


def test_delta_zero_requires_delta_zero(table5):
    """[TRIVIAL] The reduced-model check refuses delta != 0."""
    with pytest.raises(ValueError):
        delta_zero_check(table5.params)


def test_delta_zero_root_matches_quadratic(table5):
    """[DERIVED] With delta = 0 the linear root equals the quadratic's
    unique positive root."""
    p = dataclasses.replace(table5.params, delta=0.0)
    assert net_reproductive_number(p) > 1.0
    res = delta_zero_check(p)
    eq = solve_endemic(p)
    assert len(eq.endemic) == 1
    assert res["no_endemic"] is False
    assert res["lambda_root"] == pytest.approx(eq.endemic[0][1], rel=1e-8)


def test_delta_zero_subcritical_has_no_endemic(sec22):
    """[DERIVED] delta = 0 and R0 < 1 leaves no positive root."""
    p = dataclasses.replace(sec22.params, delta=0.0)
    if net_reproductive_number(p) <= 1.0:
        pytest.skip("vector population not established")
    rep = bifurcation_thresholds(p)
    if rep.r0 >= 1.0:
        pytest.skip("not subcritical without disease mortality")
    res = delta_zero_check(p)
    assert res["no_endemic"] is True


def test_scan_dfe_only_at_zero_transmission(sec22):
    """[TRIVIAL] beta_hv = 0 rows carry only the DFE branch."""
    rows = bifurcation_scan(sec22.params, "beta_hv", 0.0, 0.0, 0)
    assert all(r.branch_id == 0 for r in rows)


def test_scan_branch_birth_matches_thresholds(sec22):
    """[DERIVED] The two-endemic window opens at beta_plus in the scan."""
    rep = bifurcation_thresholds(sec22.params)
    lo, hi, steps = 0.0, 0.0877, 500
    cell = (hi - lo) / steps
    rows = bifurcation_scan(sec22.params, "beta_hv", lo, hi, steps)
    count = {}
    for r in rows:
        if r.branch_id >= 1:
            count[r.param_value] = count.get(r.param_value, 0) + 1
    two = sorted(v for v, c in count.items() if c == 2)
    assert two, "no two-endemic rows in the scan"
    assert abs(two[0] - rep.beta_plus) <= cell


def test_scan_handles_collapsed_vector_population(table5):
    """[TRIVIAL] Rows with N <= 1 report the trivial regime, no aborts."""
    rows = bifurcation_scan(table5.params, "mu_b", 0.05, 6.0, 20)
    assert any(r.r0 == 0.0 and r.branch_id == 0 for r in rows)
    assert any(r.branch_id == 1 for r in rows)
    assert all(r.error is None for r in rows)


def test_scan_rejects_unknown_parameter(table5):
    """[TRIVIAL] Typos in the scan parameter fail fast."""
    with pytest.raises(ValueError):
        bifurcation_scan(table5.params, "beta_xy", 0.0, 1.0, 10)
