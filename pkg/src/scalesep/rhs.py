"""Tabulated right-hand sides for the ODE solvers.

A TabulatedRhs wraps a single-channel TimeSeries of samples f(t_k) and
evaluates f anywhere inside the tabulated span, by linear interpolation
or by piecewise cubic Hermite interpolation with finite-difference
slopes.  Evaluation at a grid point reproduces the sample exactly (times
within 1e-9 * dt of a node snap to it); extrapolation is refused, since
data-driven components are only trustworthy on their training window.
"""

from __future__ import annotations

import numpy as np

from .errors import OutOfRange
from .series import TimeSeries

#: Snap/span tolerance, in grid units (fraction of dt).
NODE_TOL = 1e-9

INTERPOLATIONS = ("linear", "cubic")


def hermite_slopes(values: np.ndarray, dt: float) -> np.ndarray:
    """Finite-difference slope estimates at every sample.

    Uses fourth-order five-point stencils when the grid allows (n >= 5),
    so the cubic Hermite interpolant keeps its O(dt^4) accuracy; shorter
    grids fall back to second-order and, for n == 2, a single secant.
    """
    v = np.asarray(values, dtype=float)
    n = v.size
    m = np.empty(n)
    if n >= 5:
        m[2:-2] = (v[:-4] - 8 * v[1:-3] + 8 * v[3:-1] - v[4:]) / (12 * dt)
        m[0] = (-25 * v[0] + 48 * v[1] - 36 * v[2] + 16 * v[3] - 3 * v[4]) / (12 * dt)
        m[1] = (-3 * v[0] - 10 * v[1] + 18 * v[2] - 6 * v[3] + v[4]) / (12 * dt)
        m[-2] = (3 * v[-1] + 10 * v[-2] - 18 * v[-3] + 6 * v[-4] - v[-5]) / (12 * dt)
        m[-1] = (25 * v[-1] - 48 * v[-2] + 36 * v[-3] - 16 * v[-4] + 3 * v[-5]) / (12 * dt)
    elif n >= 3:
        m[1:-1] = (v[2:] - v[:-2]) / (2 * dt)
        m[0] = (-3 * v[0] + 4 * v[1] - v[2]) / (2 * dt)
        m[-1] = (3 * v[-1] - 4 * v[-2] + v[-3]) / (2 * dt)
    else:
        m[:] = (v[1] - v[0]) / dt
    return m


class TabulatedRhs:
    """Time-indexed samples of a right-hand side plus an interpolation rule.

    Parameters
    ----------
    grid : TimeSeries
        Single-channel series of f(t_k) samples.
    interpolation : str
        "linear" or "cubic" (piecewise Hermite, C^1 on the span).
    """

    def __init__(self, grid: TimeSeries, interpolation: str = "cubic"):
        if grid.n_channels != 1:
            raise ValueError(f"RHS grid must have 1 channel, got {grid.n_channels}")
        if interpolation not in INTERPOLATIONS:
            raise ValueError(f"interpolation must be one of {INTERPOLATIONS}")
        self.grid = grid
        self.interpolation = interpolation
        self._values = grid.values[0]
        if interpolation == "cubic":
            self._slopes = hermite_slopes(self._values, grid.dt)
        else:
            self._slopes = np.zeros_like(self._values)
        self._slopes.flags.writeable = False

    @property
    def t_start(self) -> float:
        return self.grid.t0

    @property
    def t_end(self) -> float:
        return self.grid.t_end

    def covers(self, t0: float, t1: float) -> bool:
        """Whether [t0, t1] lies inside the tabulated span (with node slop)."""
        tol = NODE_TOL * self.grid.dt
        return t0 >= self.t_start - tol and t1 <= self.t_end + tol

    def __call__(self, t):
        return self.eval(t)

    def eval(self, t):
        """Interpolated value(s) at ``t`` (scalar or array).

        Raises OutOfRange for any time outside the tabulated span.
        """
        t_arr = np.asarray(t, dtype=float)
        scalar = t_arr.ndim == 0
        t_arr = np.atleast_1d(t_arr)
        g = self.grid
        n = g.n_samples
        u = (t_arr - g.t0) / g.dt
        if np.any(u < -NODE_TOL) or np.any(u > (n - 1) + NODE_TOL):
            bad = t_arr[np.argmax((u < -NODE_TOL) | (u > (n - 1) + NODE_TOL))]
            raise OutOfRange(
                f"t={bad!r} outside tabulated span [{self.t_start!r}, {self.t_end!r}]"
            )
        r = np.floor(u + 0.5)
        u = np.where(np.abs(u - r) < NODE_TOL, r, u)
        u = np.clip(u, 0.0, float(n - 1))
        i = np.minimum(u.astype(np.int64), n - 2)
        s = u - i
        v = self._values
        if self.interpolation == "linear":
            out = v[i] + s * (v[i + 1] - v[i])
        else:
            m = self._slopes
            h00 = (1 + 2 * s) * (1 - s) * (1 - s)
            h10 = s * (1 - s) * (1 - s)
            h01 = s * s * (3 - 2 * s)
            h11 = s * s * (s - 1)
            out = h00 * v[i] + h10 * g.dt * m[i] + h01 * v[i + 1] + h11 * g.dt * m[i + 1]
        return float(out[0]) if scalar else out


def eval_rhs(rhs: TabulatedRhs, t):
    """Evaluate a tabulated right-hand side at time(s) ``t``."""
    return rhs.eval(t)
