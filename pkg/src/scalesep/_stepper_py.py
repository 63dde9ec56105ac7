"""Pure-Python time-stepping kernels.

Fallback mirror of the compiled extension ``scalesep._stepper``: same
functions, same argument layout, and the same floating-point operation
order, so the two backends produce bitwise-identical trajectories.  Any
change here must be replicated in ``_stepper.pyx``.
"""

from math import fabs, floor

import numpy as np

BACKEND = "python"

# Node snap / span slop, in grid units (keep equal to rhs.NODE_TOL).
_NODE_TOL = 1e-9


def eval_tabulated(g_t0, g_dt, values, slopes, cubic, t):
    """Scalar interpolation of a tabulated function at time ``t``.

    ``values``/``slopes`` are the samples and (for cubic Hermite) the
    precomputed slopes; times within ``_NODE_TOL`` grid units of a node
    return the sample exactly.  Out-of-span times are clamped; callers
    validate spans up front.
    """
    n = len(values)
    u = (t - g_t0) / g_dt
    r = floor(u + 0.5)
    if fabs(u - r) < _NODE_TOL:
        u = float(r)
    if u < 0.0:
        u = 0.0
    top = float(n - 1)
    if u > top:
        u = top
    i = int(u)
    if i > n - 2:
        i = n - 2
    s = u - i
    if cubic:
        h00 = (1.0 + 2.0 * s) * (1.0 - s) * (1.0 - s)
        h10 = s * (1.0 - s) * (1.0 - s)
        h01 = s * s * (3.0 - 2.0 * s)
        h11 = s * s * (s - 1.0)
        return h00 * values[i] + h10 * g_dt * slopes[i] + h01 * values[i + 1] + h11 * g_dt * slopes[i + 1]
    return values[i] + s * (values[i + 1] - values[i])


def _rk4_sum(s_t0, s_dt, s_v, s_m, s_cubic, f_t0, f_dt, f_v, f_m, f_cubic, t, y, h):
    """One classical RK4 step of y' = fs(t) + ff(t).

    Stages 2 and 3 coincide for a time-only right-hand side.
    """
    k1 = eval_tabulated(s_t0, s_dt, s_v, s_m, s_cubic, t) + eval_tabulated(
        f_t0, f_dt, f_v, f_m, f_cubic, t
    )
    th = t + 0.5 * h
    k2 = eval_tabulated(s_t0, s_dt, s_v, s_m, s_cubic, th) + eval_tabulated(
        f_t0, f_dt, f_v, f_m, f_cubic, th
    )
    te = t + h
    k4 = eval_tabulated(s_t0, s_dt, s_v, s_m, s_cubic, te) + eval_tabulated(
        f_t0, f_dt, f_v, f_m, f_cubic, te
    )
    return y + h / 6.0 * (k1 + 4.0 * k2 + k4)


def _rk4_single(g_t0, g_dt, v, m, cubic, t, y, h):
    """One classical RK4 step of y' = f(t) for one tabulated field."""
    k1 = eval_tabulated(g_t0, g_dt, v, m, cubic, t)
    k2 = eval_tabulated(g_t0, g_dt, v, m, cubic, t + 0.5 * h)
    k4 = eval_tabulated(g_t0, g_dt, v, m, cubic, t + h)
    return y + h / 6.0 * (k1 + 4.0 * k2 + k4)


def solve_fixed(
    s_t0, s_dt, s_values, s_slopes, s_cubic,
    f_t0, f_dt, f_values, f_slopes, f_cubic,
    y0, t0, h, n_steps,
):
    """Single-rate RK4 on f = fs + ff; returns y at every step boundary."""
    s_v = s_values.tolist()
    s_m = s_slopes.tolist()
    f_v = f_values.tolist()
    f_m = f_slopes.tolist()
    out = np.empty(n_steps + 1)
    y = y0
    out[0] = y
    for k in range(n_steps):
        t = t0 + k * h
        y = _rk4_sum(s_t0, s_dt, s_v, s_m, s_cubic, f_t0, f_dt, f_v, f_m, f_cubic, t, y, h)
        out[k + 1] = y
    return out


def solve_split(
    s_t0, s_dt, s_values, s_slopes, s_cubic,
    f_t0, f_dt, f_values, f_slopes, f_cubic,
    y0, t0, big_h, n_slow, n_sub, strang,
):
    """Multirate operator splitting; returns y at every slow-step boundary.

    Per slow step: the slow field advances through two RK4 half-steps of
    size H/2 and the fast field through ``n_sub`` RK4 substeps of size
    H/n_sub.  The fast sweep runs after both slow halves (Lie-Trotter
    ordering) or between them (Strang ordering); for time-only fields the
    two orderings evaluate identical stages and differ only by rounding.
    """
    s_v = s_values.tolist()
    s_m = s_slopes.tolist()
    f_v = f_values.tolist()
    f_m = f_slopes.tolist()
    out = np.empty(n_slow + 1)
    y = y0
    out[0] = y
    h2 = 0.5 * big_h
    hf = big_h / n_sub
    for k in range(n_slow):
        t = t0 + k * big_h
        if strang:
            y = _rk4_single(s_t0, s_dt, s_v, s_m, s_cubic, t, y, h2)
            for j in range(n_sub):
                y = _rk4_single(f_t0, f_dt, f_v, f_m, f_cubic, t + j * hf, y, hf)
            y = _rk4_single(s_t0, s_dt, s_v, s_m, s_cubic, t + h2, y, h2)
        else:
            y = _rk4_single(s_t0, s_dt, s_v, s_m, s_cubic, t, y, h2)
            y = _rk4_single(s_t0, s_dt, s_v, s_m, s_cubic, t + h2, y, h2)
            for j in range(n_sub):
                y = _rk4_single(f_t0, f_dt, f_v, f_m, f_cubic, t + j * hf, y, hf)
        out[k + 1] = y
    return out
