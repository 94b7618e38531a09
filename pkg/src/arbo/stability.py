"""Local stability analysis: finite-difference Jacobians, Routh-Hurwitz
for the trivial equilibrium, center-manifold bifurcation coefficients at
the transcritical point, and a numeric Lyapunov monotonicity check."""

from __future__ import annotations

import dataclasses
import enum
import math
from dataclasses import dataclass, field

import numpy as np

from .model import (
    E_H, E_V, EGG, I_H, I_V, LAR, PUP, R_H, S_H, S_V,
    ModelParams, basic_field, derive_constants,
)
from .ode import Trajectory
from .thresholds import (
    ThresholdError, bifurcation_thresholds, dfe_components,
    net_reproductive_number,
)

# Eigenvalue verdicts: stable iff max real part < -_STABLE_TOL; real
# parts inside (-_STABLE_TOL, _STABLE_TOL) are marginal.
_STABLE_TOL = 1e-9


class Method(enum.Enum):
    EIGEN = "Eigen"
    ROUTH_HURWITZ = "RouthHurwitz"


class Direction(enum.Enum):
    BACKWARD = "Backward"
    FORWARD = "Forward"


class KernelError(ArithmeticError):
    """The Jacobian kernel at the bifurcation point is not one-dimensional."""


@dataclass(frozen=True)
class StabilityVerdict:
    eigen_max_real: float
    stable: bool
    method: Method
    marginal: bool = False


@dataclass(frozen=True)
class BifurcationCoefficients:
    """Center-manifold constants at the transcritical point beta_hv = beta*.

    `bif_a1` is zeta1 - zeta2 from the closed forms; `bif_a1_generic` is
    the same quantity evaluated through the second-derivative double sum
    (directional Hessian), used as a cross-check.
    """

    zeta1: float
    zeta2: float
    bif_a1: float
    bif_a2: float
    bif_a1_generic: float
    left_vec: np.ndarray = field(repr=False)
    right_vec: np.ndarray = field(repr=False)
    direction: Direction = Direction.FORWARD


def jacobian(x, p: ModelParams, field_fn=None) -> np.ndarray:
    """Central finite-difference Jacobian, step 1e-6*max(1, |x_i|).

    `field_fn(x)` defaults to the uncontrolled right-hand side.
    """
    if field_fn is None:
        field_fn = lambda y: basic_field(y, p)
    x = np.asarray(x, dtype=float)
    n = x.shape[0]
    jac = np.empty((n, n))
    for i in range(n):
        h = 1e-6 * max(1.0, abs(x[i]))
        xp = x.copy()
        xm = x.copy()
        xp[i] += h
        xm[i] -= h
        jac[:, i] = (field_fn(xp) - field_fn(xm)) / (2.0 * h)
    return jac


def eigen_verdict(x, p: ModelParams) -> StabilityVerdict:
    """Stability of an equilibrium from the dense eigenspectrum."""
    eig = np.linalg.eigvals(jacobian(x, p))
    max_real = float(np.max(eig.real))
    return StabilityVerdict(
        eigen_max_real=max_real,
        stable=max_real < -_STABLE_TOL,
        method=Method.EIGEN,
        marginal=abs(max_real) <= _STABLE_TOL)


def routh_hurwitz_trivial(p: ModelParams) -> StabilityVerdict:
    """Routh-Hurwitz verdict for the vector-free equilibrium.

    The linearization block-decouples; the nontrivial part is the
    aquatic-adult quartic whose constant coefficient is proportional to
    (1 - N), so the verdict flips exactly at the persistence threshold.
    """
    k = derive_constants(p)
    n = net_reproductive_number(p)
    mu_v = k.k8
    c1 = mu_v + k.k7 + k.k6 + k.k5
    c2 = (k.k7 + k.k6 + k.k5) * mu_v + (k.k6 + k.k5) * k.k7 + k.k5 * k.k6
    c3 = ((k.k6 + k.k5) * k.k7 + k.k5 * k.k6) * mu_v + k.k5 * k.k6 * k.k7
    c4 = k.k5 * k.k6 * k.k7 * mu_v * (1.0 - n)
    h1 = c1
    h2 = c1 * c2 - c3
    h3 = c1 * c2 * c3 - c1 ** 2 * c4 - c3 ** 2
    h4 = c4 * h3
    stable = h1 > 0 and h2 > 0 and h3 > 0 and h4 > 0
    roots = np.roots([1.0, c1, c2, c3, c4])
    return StabilityVerdict(
        eigen_max_real=float(np.max(roots.real)),
        stable=stable,
        method=Method.ROUTH_HURWITZ)


def _null_vector(m: np.ndarray) -> tuple[np.ndarray, float, float]:
    """Unit kernel vector of an (approximately singular) matrix via SVD,
    plus the two smallest singular values for a dimension check."""
    _, s, vt = np.linalg.svd(m)
    return vt[-1], s[-1], s[-2]


def bifurcation_coefficients(p: ModelParams) -> BifurcationCoefficients:
    """Center-manifold constants at beta_hv = beta* (set internally).

    The right/left null vectors of the Jacobian at the biological DFE
    are computed numerically (the kernel is one-dimensional), scaled so
    the infectious-vector component of the right vector is 1 and the
    left/right product is 1.
    """
    n = net_reproductive_number(p)
    if n <= 1.0:
        raise ThresholdError(
            f"bifurcation analysis requires net reproductive number > 1, got {n:.6g}")
    rep = bifurcation_thresholds(p)
    ps = dataclasses.replace(p, beta_hv=rep.beta_star)
    e1 = dfe_components(ps)
    jac = jacobian(e1, ps)

    scale = np.max(np.abs(jac))
    w, s_min, s_next = _null_vector(jac)
    if s_min > 1e-6 * scale or s_next < 1e-6 * scale:
        raise KernelError(
            f"Jacobian kernel is not one-dimensional: sigma_min={s_min:.3g}, "
            f"next={s_next:.3g} (scale {scale:.3g})")
    v, sv_min, sv_next = _null_vector(jac.T)
    if sv_min > 1e-6 * scale or sv_next < 1e-6 * scale:
        raise KernelError(
            f"transposed-Jacobian kernel is not one-dimensional: "
            f"sigma_min={sv_min:.3g}, next={sv_next:.3g}")

    if w[I_V] == 0.0:
        raise KernelError("right null vector has zero infectious-vector component")
    w = w / w[I_V]
    vw = float(v @ w)
    if vw == 0.0:
        raise KernelError("left and right null vectors are orthogonal")
    v = v / vw

    k = derive_constants(ps)
    nh0 = e1[S_H]
    nv0 = e1[S_V]
    k1c = ps.mu_b * (1.0 - e1[EGG] / ps.Gamma_E)
    k2c = k.k5 + ps.mu_b * nv0 / ps.Gamma_E
    k3c = ps.s * (1.0 - e1[LAR] / ps.Gamma_L)
    k4c = k.k6 + ps.s * e1[EGG] / ps.Gamma_L

    w1, w2, w3, w4 = w[S_H], w[E_H], w[I_H], w[R_H]
    w6, w7, w10 = w[E_V], w[I_V], w[PUP]
    v2, v6 = v[E_H], v[E_V]
    abvh = ps.a * ps.beta_vh
    infect_h = ps.eta_h * w2 + w3

    zeta1 = v6 * (2.0 * (k.k7 * k2c * k4c / (ps.l * k1c * k3c))
                  * (abvh / nh0) * infect_h * w10
                  - 2.0 * (abvh * nv0 / nh0 ** 2) * infect_h * w1)
    zeta2 = (v2 * 2.0 * (ps.a * rep.beta_star / nh0)
             * (ps.eta_v * w6 + w7) * (w2 + w3 + w4)
             + v6 * (2.0 * (abvh * nv0 / nh0 ** 2)
                     * (ps.eta_h * w2 ** 2 + (ps.eta_h + 1.0) * w2 * w3
                        + ps.eta_h * w2 * w4 + w3 ** 2 + w3 * w4)
                     + 2.0 * (abvh * k.k9 / (ps.gamma_v * nh0)) * infect_h * w7))
    bif_a1 = zeta1 - zeta2
    bif_a2 = (ps.a * nv0 / nh0) * (ps.eta_h * w6 + w7) * v2
    bif_a1_generic = hessian_double_sum(ps, e1, v, w)

    return BifurcationCoefficients(
        zeta1=zeta1, zeta2=zeta2, bif_a1=bif_a1, bif_a2=bif_a2,
        bif_a1_generic=bif_a1_generic, left_vec=v, right_vec=w,
        direction=Direction.BACKWARD if bif_a1 > 0 else Direction.FORWARD)


def hessian_double_sum(p: ModelParams, x0, v, w) -> float:
    """sum_k v_k sum_ij w_i w_j d2 f_k / dx_i dx_j at x0.

    Evaluated as the second directional derivative of phi(eps) =
    v . f(x0 + eps*w), with a fourth-order central stencil and one
    Richardson step for accuracy.
    """
    x0 = np.asarray(x0, dtype=float)
    w = np.asarray(w, dtype=float)
    v = np.asarray(v, dtype=float)

    def phi(eps: float) -> float:
        return float(v @ basic_field(x0 + eps * w, p))

    scale = max(1.0, float(np.max(np.abs(x0)))) / max(1.0, float(np.max(np.abs(w))))

    def second(h: float) -> float:
        return ((-phi(2 * h) + 16.0 * phi(h) - 30.0 * phi(0.0)
                 + 16.0 * phi(-h) - phi(-2 * h)) / (12.0 * h * h))

    h = 1e-3 * scale
    d_h = second(h)
    d_h2 = second(0.5 * h)
    # One Richardson step on the O(h^4) stencil.
    return (16.0 * d_h2 - d_h) / 15.0


_LYAPUNOV_DOC_WEIGHTS = """Weights (1,...,1, k8/mu_b, k5k8/(mu_b s), k5k6k8/(mu_b s l))."""


def lyapunov_weights(p: ModelParams) -> np.ndarray:
    k = derive_constants(p)
    g = np.ones(10)
    g[EGG] = k.k8 / p.mu_b
    g[LAR] = k.k5 * k.k8 / (p.mu_b * p.s)
    g[PUP] = k.k5 * k.k6 * k.k8 / (p.mu_b * p.s * p.l)
    return g


def lyapunov_trivial_check(p: ModelParams, traj: Trajectory) -> dict:
    """Monotonicity audit of the linear Lyapunov function about the
    vector-free equilibrium along a trajectory.  Requires N <= 1."""
    n = net_reproductive_number(p)
    if n > 1.0:
        raise ValueError(
            f"Lyapunov check applies only when net reproductive number <= 1, got {n:.6g}")
    g = lyapunov_weights(p)
    e0 = dfe_components(p, trivial=True)
    values = (traj.values - e0) @ g
    increments = np.diff(values)
    max_inc = float(np.max(increments)) if increments.size else 0.0
    return {
        "values": values,
        "initial": float(values[0]),
        "max_increment": max_inc,
        "monotone": bool(max_inc <= 1e-9 * max(1.0, abs(values[0]))),
    }
