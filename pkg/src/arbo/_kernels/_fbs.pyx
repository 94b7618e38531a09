# cython: boundscheck=False, wraparound=False, cdivision=True, language_level=3
"""Compiled RK4 kernels for the forward-backward sweep hot path.

Operation-for-operation mirror of `fallback.py`; see that module for the
flat parameter-array layout.
"""

import numpy as np

cimport numpy as cnp

cnp.import_array()

BACKEND = "cython"

ctypedef cnp.float64_t f64


cdef inline void _basic_rhs(double* x, double* par, double* dx) noexcept nogil:
    cdef double n_h = x[0] + x[1] + x[2] + x[3]
    cdef double foi_h = par[2] * par[3] * (par[9] * x[5] + x[6]) / n_h
    cdef double foi_v = par[2] * par[4] * (par[8] * x[1] + x[2]) / n_h
    cdef double n_v = x[4] + x[5] + x[6]
    dx[0] = par[0] - (foi_h + par[1]) * x[0]
    dx[1] = foi_h * x[0] - (par[1] + par[5]) * x[1]
    dx[2] = par[5] * x[1] - (par[1] + par[6] + par[7]) * x[2]
    dx[3] = par[7] * x[2] - par[1] * x[3]
    dx[4] = par[12] * x[9] - foi_v * x[4] - par[10] * x[4]
    dx[5] = foi_v * x[4] - (par[10] + par[11]) * x[5]
    dx[6] = par[11] * x[5] - par[10] * x[6]
    dx[7] = par[13] * (1.0 - x[7] / par[14]) * n_v - (par[19] + par[16]) * x[7]
    dx[8] = par[19] * x[7] * (1.0 - x[8] / par[15]) - (par[20] + par[17]) * x[8]
    dx[9] = par[20] * x[8] - (par[12] + par[18]) * x[9]


cdef inline void _controlled_rhs(double* x, double* u, double* par,
                                 double* cpar, double* dx) noexcept nogil:
    cdef double n_h = x[0] + x[1] + x[2] + x[3]
    cdef double foi_h = par[2] * par[3] * (par[9] * x[5] + x[6]) / n_h
    cdef double foi_v = par[2] * par[4] * (par[8] * x[1] + x[2]) / n_h
    cdef double n_v = x[4] + x[5] + x[6]
    cdef double protect = 1.0 - cpar[1] * u[1]
    cdef double foi_h_c = protect * foi_h
    cdef double foi_v_c = protect * foi_v
    cdef double mu_v_c = par[10] + cpar[3] * u[3]
    dx[0] = par[0] - (foi_h_c + par[1] + u[0]) * x[0] + cpar[0] * u[0] * x[3]
    dx[1] = foi_h_c * x[0] - (par[1] + par[5]) * x[1]
    dx[2] = (par[5] * x[1]
             - (par[1] + (1.0 - cpar[2] * u[2]) * par[6]
                + par[7] + cpar[2] * u[2]) * x[2])
    dx[3] = ((par[7] + cpar[2] * u[2]) * x[2] + u[0] * x[0]
             - (par[1] + cpar[0] * u[0]) * x[3])
    dx[4] = par[12] * x[9] - foi_v_c * x[4] - mu_v_c * x[4]
    dx[5] = foi_v_c * x[4] - (par[10] + par[11] + cpar[3] * u[3]) * x[5]
    dx[6] = par[11] * x[5] - mu_v_c * x[6]
    dx[7] = (par[13] * (1.0 - x[7] / par[14]) * n_v
             - (par[19] + par[16] + cpar[4] * u[4]) * x[7])
    dx[8] = (par[19] * x[7] * (1.0 - x[8] / par[15])
             - (par[20] + par[17] + cpar[5] * u[4]) * x[8])
    dx[9] = par[20] * x[8] - (par[12] + par[18]) * x[9]


cdef inline void _adjoint_rhs(double* lam, double* x, double* u, double* par,
                              double* cpar, double* dwts,
                              double* d) noexcept nogil:
    cdef double n_h = x[0] + x[1] + x[2] + x[3]
    cdef double k3 = par[1] + par[5]
    cdef double k5 = par[19] + par[16]
    cdef double k6 = par[20] + par[17]
    cdef double k7 = par[12] + par[18]
    cdef double k9 = par[10] + par[11]
    cdef double g2 = 1.0 - cpar[1] * u[1]
    cdef double fh = par[2] * par[3] * (par[9] * x[5] + x[6]) / n_h
    cdef double fv = par[2] * par[4] * (par[8] * x[1] + x[2]) / n_h
    cdef double m_v = par[10] + cpar[3] * u[3]
    cdef double q = g2 * fv * x[4] / n_h
    cdef double share = g2 * fh * x[0] / n_h
    cdef double egg_room = par[13] * (1.0 - x[7] / par[14])
    cdef double n_v = x[4] + x[5] + x[6]
    cdef double treat = cpar[2] * u[2]
    d[0] = ((lam[0] - lam[1]) * g2 * fh * (1.0 - x[0] / n_h)
            + (par[1] + u[0]) * lam[0] - u[0] * lam[3]
            + q * (lam[5] - lam[4]))
    d[1] = ((lam[1] - lam[0]) * share + k3 * lam[1] - par[5] * lam[2]
            + (lam[4] - lam[5]) * g2 * x[4]
            * (par[2] * par[4] * par[8] - fv) / n_h)
    d[2] = (-dwts[0] + (lam[1] - lam[0]) * share
            + (par[1] + (1.0 - treat) * par[6] + par[7] + treat) * lam[2]
            - (par[7] + treat) * lam[3]
            + (lam[4] - lam[5]) * g2 * x[4] * (par[2] * par[4] - fv) / n_h)
    d[3] = ((lam[1] - lam[0]) * share - cpar[0] * u[0] * lam[0]
            + (par[1] + cpar[0] * u[0]) * lam[3] + q * (lam[5] - lam[4]))
    d[4] = (-dwts[1] + (lam[4] - lam[5]) * g2 * fv + m_v * lam[4]
            - egg_room * lam[7])
    d[5] = (-dwts[1] + (lam[0] - lam[1]) * g2 * par[2] * par[3] * par[9] * x[0] / n_h
            + (k9 + cpar[3] * u[3]) * lam[5] - par[11] * lam[6]
            - egg_room * lam[7])
    d[6] = (-dwts[1] + (lam[0] - lam[1]) * g2 * par[2] * par[3] * x[0] / n_h
            + m_v * lam[6] - egg_room * lam[7])
    d[7] = (-dwts[2] + (par[13] * n_v / par[14] + k5 + cpar[4] * u[4]) * lam[7]
            - par[19] * (1.0 - x[8] / par[15]) * lam[8])
    d[8] = (-dwts[3] + (par[19] * x[7] / par[15] + k6 + cpar[5] * u[4]) * lam[8]
            - par[20] * lam[9])
    d[9] = -par[12] * lam[4] + k7 * lam[9]


def rk4_basic(cnp.ndarray[f64, ndim=1] par, x0, int n_steps, double dt):
    cdef cnp.ndarray[f64, ndim=2] out = np.empty((n_steps + 1, 10))
    cdef cnp.ndarray[f64, ndim=1] x = np.array(x0, dtype=np.float64)
    cdef double k1[10], k2[10], k3[10], k4[10], xs[10], cur[10]
    cdef int i, j
    for j in range(10):
        cur[j] = x[j]
        out[0, j] = cur[j]
    cdef double* pp = <double*> par.data
    for i in range(n_steps):
        _basic_rhs(cur, pp, k1)
        for j in range(10):
            xs[j] = cur[j] + 0.5 * dt * k1[j]
        _basic_rhs(xs, pp, k2)
        for j in range(10):
            xs[j] = cur[j] + 0.5 * dt * k2[j]
        _basic_rhs(xs, pp, k3)
        for j in range(10):
            xs[j] = cur[j] + dt * k3[j]
        _basic_rhs(xs, pp, k4)
        for j in range(10):
            cur[j] = cur[j] + (dt / 6.0) * (k1[j] + 2.0 * k2[j] + 2.0 * k3[j] + k4[j])
            out[i + 1, j] = cur[j]
    return out


def rk4_controlled(cnp.ndarray[f64, ndim=1] par, cnp.ndarray[f64, ndim=1] cpar,
                   x0, cnp.ndarray[f64, ndim=2] u, double dt):
    cdef int n_steps = u.shape[0] - 1
    cdef cnp.ndarray[f64, ndim=2] out = np.empty((n_steps + 1, 10))
    cdef cnp.ndarray[f64, ndim=1] x = np.ascontiguousarray(x0, dtype=np.float64)
    cdef cnp.ndarray[f64, ndim=2] uc = np.ascontiguousarray(u)
    cdef double k1[10], k2[10], k3[10], k4[10], xs[10], cur[10]
    cdef double u_lo[5], u_mid[5], u_hi[5]
    cdef int i, j
    for j in range(10):
        cur[j] = x[j]
        out[0, j] = cur[j]
    cdef double* pp = <double*> par.data
    cdef double* cp = <double*> cpar.data
    for i in range(n_steps):
        for j in range(5):
            u_lo[j] = uc[i, j]
            u_hi[j] = uc[i + 1, j]
            u_mid[j] = 0.5 * (u_lo[j] + u_hi[j])
        _controlled_rhs(cur, u_lo, pp, cp, k1)
        for j in range(10):
            xs[j] = cur[j] + 0.5 * dt * k1[j]
        _controlled_rhs(xs, u_mid, pp, cp, k2)
        for j in range(10):
            xs[j] = cur[j] + 0.5 * dt * k2[j]
        _controlled_rhs(xs, u_mid, pp, cp, k3)
        for j in range(10):
            xs[j] = cur[j] + dt * k3[j]
        _controlled_rhs(xs, u_hi, pp, cp, k4)
        for j in range(10):
            cur[j] = cur[j] + (dt / 6.0) * (k1[j] + 2.0 * k2[j] + 2.0 * k3[j] + k4[j])
            out[i + 1, j] = cur[j]
    return out


def rk4_adjoint(cnp.ndarray[f64, ndim=1] par, cnp.ndarray[f64, ndim=1] cpar,
                cnp.ndarray[f64, ndim=1] dwts, cnp.ndarray[f64, ndim=2] states,
                cnp.ndarray[f64, ndim=2] u, double dt):
    cdef int n_steps = states.shape[0] - 1
    cdef cnp.ndarray[f64, ndim=2] out = np.empty((n_steps + 1, 10))
    cdef cnp.ndarray[f64, ndim=2] xc = np.ascontiguousarray(states)
    cdef cnp.ndarray[f64, ndim=2] uc = np.ascontiguousarray(u)
    cdef double k1[10], k2[10], k3[10], k4[10], ls[10], lam[10]
    cdef double x_lo[10], x_mid[10], x_hi[10]
    cdef double u_lo[5], u_mid[5], u_hi[5]
    cdef int i, j
    for j in range(10):
        lam[j] = 0.0
        out[n_steps, j] = 0.0
    cdef double* pp = <double*> par.data
    cdef double* cp = <double*> cpar.data
    cdef double* dw = <double*> dwts.data
    for i in range(n_steps - 1, -1, -1):
        for j in range(10):
            x_hi[j] = xc[i + 1, j]
            x_lo[j] = xc[i, j]
            x_mid[j] = 0.5 * (x_lo[j] + x_hi[j])
        for j in range(5):
            u_hi[j] = uc[i + 1, j]
            u_lo[j] = uc[i, j]
            u_mid[j] = 0.5 * (u_lo[j] + u_hi[j])
        _adjoint_rhs(lam, x_hi, u_hi, pp, cp, dw, k1)
        for j in range(10):
            ls[j] = lam[j] - 0.5 * dt * k1[j]
        _adjoint_rhs(ls, x_mid, u_mid, pp, cp, dw, k2)
        for j in range(10):
            ls[j] = lam[j] - 0.5 * dt * k2[j]
        _adjoint_rhs(ls, x_mid, u_mid, pp, cp, dw, k3)
        for j in range(10):
            ls[j] = lam[j] - dt * k3[j]
        _adjoint_rhs(ls, x_lo, u_lo, pp, cp, dw, k4)
        for j in range(10):
            lam[j] = lam[j] - (dt / 6.0) * (k1[j] + 2.0 * k2[j] + 2.0 * k3[j] + k4[j])
            out[i, j] = lam[j]
    return out
