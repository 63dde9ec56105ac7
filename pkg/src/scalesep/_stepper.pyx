# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled time-stepping kernels.

Hot path of the ODE solvers: tabulated-field interpolation inside
fixed-step RK4 loops.  Mirrors ``_stepper_py`` operation for operation
(same floating-point order, no fused multiply-adds), so results are
bitwise identical to the pure-Python fallback.
"""

from libc.math cimport fabs, floor

import numpy as np

BACKEND = "compiled"

# Node snap / span slop, in grid units (keep equal to rhs.NODE_TOL).
cdef double _NODE_TOL = 1e-9


cdef double _eval(double g_t0, double g_dt, double[::1] v, double[::1] m,
                  bint cubic, double t) noexcept nogil:
    cdef Py_ssize_t n = v.shape[0]
    cdef double u = (t - g_t0) / g_dt
    cdef double r = floor(u + 0.5)
    cdef double top, s, h00, h10, h01, h11
    cdef Py_ssize_t i
    if fabs(u - r) < _NODE_TOL:
        u = r
    if u < 0.0:
        u = 0.0
    top = <double>(n - 1)
    if u > top:
        u = top
    i = <Py_ssize_t>u
    if i > n - 2:
        i = n - 2
    s = u - i
    if cubic:
        h00 = (1.0 + 2.0 * s) * (1.0 - s) * (1.0 - s)
        h10 = s * (1.0 - s) * (1.0 - s)
        h01 = s * s * (3.0 - 2.0 * s)
        h11 = s * s * (s - 1.0)
        return h00 * v[i] + h10 * g_dt * m[i] + h01 * v[i + 1] + h11 * g_dt * m[i + 1]
    return v[i] + s * (v[i + 1] - v[i])


def eval_tabulated(double g_t0, double g_dt, double[::1] values,
                   double[::1] slopes, bint cubic, double t):
    """Scalar interpolation of a tabulated function at time ``t``."""
    return _eval(g_t0, g_dt, values, slopes, cubic, t)


cdef double _rk4_sum(double s_t0, double s_dt, double[::1] s_v, double[::1] s_m,
                     bint s_cubic, double f_t0, double f_dt, double[::1] f_v,
                     double[::1] f_m, bint f_cubic,
                     double t, double y, double h) noexcept nogil:
    # stages 2 and 3 coincide for a time-only right-hand side
    cdef double k1 = _eval(s_t0, s_dt, s_v, s_m, s_cubic, t) + _eval(f_t0, f_dt, f_v, f_m, f_cubic, t)
    cdef double th = t + 0.5 * h
    cdef double k2 = _eval(s_t0, s_dt, s_v, s_m, s_cubic, th) + _eval(f_t0, f_dt, f_v, f_m, f_cubic, th)
    cdef double te = t + h
    cdef double k4 = _eval(s_t0, s_dt, s_v, s_m, s_cubic, te) + _eval(f_t0, f_dt, f_v, f_m, f_cubic, te)
    return y + h / 6.0 * (k1 + 4.0 * k2 + k4)


cdef double _rk4_single(double g_t0, double g_dt, double[::1] v, double[::1] m,
                        bint cubic, double t, double y, double h) noexcept nogil:
    cdef double k1 = _eval(g_t0, g_dt, v, m, cubic, t)
    cdef double k2 = _eval(g_t0, g_dt, v, m, cubic, t + 0.5 * h)
    cdef double k4 = _eval(g_t0, g_dt, v, m, cubic, t + h)
    return y + h / 6.0 * (k1 + 4.0 * k2 + k4)


def solve_fixed(double s_t0, double s_dt, double[::1] s_values, double[::1] s_slopes,
                bint s_cubic, double f_t0, double f_dt, double[::1] f_values,
                double[::1] f_slopes, bint f_cubic,
                double y0, double t0, double h, Py_ssize_t n_steps):
    """Single-rate RK4 on f = fs + ff; returns y at every step boundary."""
    out_arr = np.empty(n_steps + 1)
    cdef double[::1] out = out_arr
    cdef double y = y0
    cdef double t
    cdef Py_ssize_t k
    out[0] = y
    with nogil:
        for k in range(n_steps):
            t = t0 + k * h
            y = _rk4_sum(s_t0, s_dt, s_values, s_slopes, s_cubic,
                         f_t0, f_dt, f_values, f_slopes, f_cubic, t, y, h)
            out[k + 1] = y
    return out_arr


def solve_split(double s_t0, double s_dt, double[::1] s_values, double[::1] s_slopes,
                bint s_cubic, double f_t0, double f_dt, double[::1] f_values,
                double[::1] f_slopes, bint f_cubic,
                double y0, double t0, double big_h, Py_ssize_t n_slow,
                Py_ssize_t n_sub, bint strang):
    """Multirate operator splitting; returns y at every slow-step boundary.

    See ``_stepper_py.solve_split`` for the scheme layout; the two
    orderings evaluate identical stages for time-only fields.
    """
    out_arr = np.empty(n_slow + 1)
    cdef double[::1] out = out_arr
    cdef double y = y0
    cdef double h2 = 0.5 * big_h
    cdef double hf = big_h / n_sub
    cdef double t
    cdef Py_ssize_t k, j
    out[0] = y
    with nogil:
        for k in range(n_slow):
            t = t0 + k * big_h
            if strang:
                y = _rk4_single(s_t0, s_dt, s_values, s_slopes, s_cubic, t, y, h2)
                for j in range(n_sub):
                    y = _rk4_single(f_t0, f_dt, f_values, f_slopes, f_cubic, t + j * hf, y, hf)
                y = _rk4_single(s_t0, s_dt, s_values, s_slopes, s_cubic, t + h2, y, h2)
            else:
                y = _rk4_single(s_t0, s_dt, s_values, s_slopes, s_cubic, t, y, h2)
                y = _rk4_single(s_t0, s_dt, s_values, s_slopes, s_cubic, t + h2, y, h2)
                for j in range(n_sub):
                    y = _rk4_single(f_t0, f_dt, f_values, f_slopes, f_cubic, t + j * hf, y, hf)
            out[k + 1] = y
    return out_arr
