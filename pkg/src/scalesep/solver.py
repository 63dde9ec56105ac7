"""Reference and multirate integrators for tabulated two-scale ODEs.

Solves ``y' = fs(t) + ff(t)`` where both fields come from data files
(see ``TabulatedRhs``).  The multirate scheme advances the slow field
with a large step H (two RK4 half-steps) and the fast field with RK4
substeps of size H/m; the reference solver is single-rate RK4 on the
summed field.  Since the tabulated fields depend only on t, the flows
commute and the splitting itself introduces no error.

The stepping loops are the package's hot path and live in a compiled
extension when available; a pure-Python mirror with identical rounding
behavior is selected at import time otherwise.  Set the environment
variable ``SCALESEP_PURE_PYTHON=1`` to force the fallback.
"""

from __future__ import annotations

import math
import os
from dataclasses import dataclass, field

import numpy as np

from .errors import InvalidSpan, InvalidStep, OutOfRange
from .rhs import TabulatedRhs
from .series import TimeSeries

if os.environ.get("SCALESEP_PURE_PYTHON"):
    from . import _stepper_py as _kernels
else:
    try:
        from . import _stepper as _kernels  # type: ignore[attr-defined]
    except ImportError:
        from . import _stepper_py as _kernels

#: True when the compiled stepping kernels are in use.
COMPILED_KERNELS = _kernels.BACKEND == "compiled"

SCHEMES = ("lie-trotter", "strang")

#: Default span of the built-in two-scale test problem: two periods of
#: the slow forcing, about twenty of the fast one.
DEFAULT_TOY_SPAN = 4 * math.pi

# Relative slop when deciding whether a step divides the span evenly.
_DIV_TOL = 1e-9


def backend_name() -> str:
    """Which stepping backend this process selected ("compiled"/"python")."""
    return _kernels.BACKEND


@dataclass(frozen=True)
class SolveResult:
    """Solution series plus the step bookkeeping that produced it."""

    solution: TimeSeries = field(repr=False)
    slow_steps: int
    fast_substeps_per_slow: int
    scheme: str


def toy_rhs(t):
    """Right-hand side of the built-in test problem: cos(10 t) + sin(t)."""
    return np.cos(10.0 * t) + np.sin(t)


def toy_closed_form(times, y0: float = 1.0):
    """Exact solution of the test problem: y0 + sin(10 t)/10 + 1 - cos(t)."""
    times = np.asarray(times, dtype=float)
    return y0 + np.sin(10.0 * times) / 10.0 + 1.0 - np.cos(times)


def generate_toy(
    t_end: float = DEFAULT_TOY_SPAN, dt: float = 0.01, y0: float = 1.0
) -> TimeSeries:
    """Integrate the test problem with classical RK4 on a uniform grid.

    The grid starts at t = 0 and ends at the smallest multiple of ``dt``
    that covers ``t_end``.
    """
    if not (dt > 0 and math.isfinite(dt)):
        raise InvalidSpan(f"dt must be positive, got {dt}")
    if not (t_end > 0 and math.isfinite(t_end)):
        raise InvalidSpan(f"t_end must be positive, got {t_end}")
    n_steps = max(1, int(math.ceil(t_end / dt - _DIV_TOL)))
    y = np.empty(n_steps + 1)
    y[0] = y0
    for k in range(n_steps):
        t = k * dt
        # stages 2 and 3 coincide for a time-only right-hand side
        k1 = toy_rhs(t)
        k2 = toy_rhs(t + 0.5 * dt)
        k4 = toy_rhs(t + dt)
        y[k + 1] = y[k] + dt / 6.0 * (k1 + 4.0 * k2 + k4)
    return TimeSeries(t0=0.0, dt=dt, values=y)


def _plan_steps(t0: float, t_end: float, step: float) -> tuple[int, float]:
    """Number of uniform steps covering [t0, t_end] and the adjusted size.

    A step that divides the span evenly (within ``_DIV_TOL`` relative) is
    kept bit for bit; otherwise all steps shrink uniformly so the grid
    still lands exactly on ``t_end`` and the output series stays uniform.
    """
    span = t_end - t0
    n = max(1, int(math.ceil(span / step - _DIV_TOL)))
    if abs(n * step - span) <= _DIV_TOL * step:
        return n, step
    return n, span / n


def _check_inputs(fs, ff, t0, t_end, step, name):
    if not isinstance(fs, TabulatedRhs) or not isinstance(ff, TabulatedRhs):
        raise TypeError("fs and ff must be TabulatedRhs instances")
    if not (math.isfinite(t0) and math.isfinite(t_end)) or t_end <= t0:
        raise InvalidSpan(f"need t_end > t0, got [{t0}, {t_end}]")
    if not (step > 0 and math.isfinite(step)):
        raise InvalidStep(f"{name} must be positive, got {step}")
    for label, rhs in (("slow", fs), ("fast", ff)):
        if not rhs.covers(t0, t_end):
            raise OutOfRange(
                f"{label} RHS spans [{rhs.t_start!r}, {rhs.t_end!r}], "
                f"which does not cover [{t0!r}, {t_end!r}]"
            )


def _pack(rhs: TabulatedRhs):
    g = rhs.grid
    return g.t0, g.dt, rhs._values, rhs._slopes, rhs.interpolation == "cubic"


def solve_reference(
    fs: TabulatedRhs,
    ff: TabulatedRhs,
    y0: float,
    t0: float,
    t_end: float,
    h: float,
) -> SolveResult:
    """Single-rate classical RK4 on the summed field fs + ff."""
    _check_inputs(fs, ff, t0, t_end, h, "h")
    n, h_eff = _plan_steps(t0, t_end, h)
    y = _kernels.solve_fixed(*_pack(fs), *_pack(ff), float(y0), float(t0), h_eff, n)
    return SolveResult(
        solution=TimeSeries(t0=t0, dt=h_eff, values=y),
        slow_steps=n,
        fast_substeps_per_slow=1,
        scheme="reference-rk4",
    )


def solve_multirate(
    fs: TabulatedRhs,
    ff: TabulatedRhs,
    y0: float,
    t0: float,
    t_end: float,
    h_slow: float,
    substeps: int,
    scheme: str = "lie-trotter",
) -> SolveResult:
    """Operator-splitting solve with slow step ``h_slow`` and ``substeps``
    fast RK4 substeps per slow step.

    ``scheme`` is "lie-trotter" (slow flow then fast sweep) or "strang"
    (half slow, fast sweep, half slow).  Both advance the slow field by
    two RK4 half-steps per slow step, so for time-only fields the scheme
    choice only permutes the update order and results agree to rounding.
    The solution is recorded at every slow-step boundary.
    """
    _check_inputs(fs, ff, t0, t_end, h_slow, "h_slow")
    if not isinstance(substeps, (int, np.integer)) or substeps < 1:
        raise InvalidStep(f"substeps must be a positive integer, got {substeps!r}")
    if scheme not in SCHEMES:
        raise InvalidStep(f"scheme must be one of {SCHEMES}, got {scheme!r}")
    n_slow, h_eff = _plan_steps(t0, t_end, h_slow)
    y = _kernels.solve_split(
        *_pack(fs),
        *_pack(ff),
        float(y0),
        float(t0),
        h_eff,
        n_slow,
        int(substeps),
        scheme == "strang",
    )
    return SolveResult(
        solution=TimeSeries(t0=t0, dt=h_eff, values=y),
        slow_steps=n_slow,
        fast_substeps_per_slow=int(substeps),
        scheme=scheme,
    )
