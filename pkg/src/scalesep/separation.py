"""Partition DMD modes into slow and fast sets and rebuild each part.

A mode is slow when its continuous frequency is small relative to the
fastest one present: |omega_j| <= epsilon * max_k |omega_k|.  Conjugate
pairs are kept together so the rebuilt components stay real.  The slow
modal sum is the low-rank (background) part; the fast remainder is the
sparse (foreground) part, either as the real modal sum (default) or as
the residual ``data - |lowrank|``.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .dmd import DmdModel, reconstruct
from .embedding import HankelEmbedding, deembed
from .errors import ShapeMismatch, TooFewSamples
from .series import TimeSeries

#: Default slow/fast frequency-ratio threshold.
DEFAULT_EPSILON = 0.05

#: Tolerance for matching an eigenvalue with its conjugate partner.
CONJUGATE_TOL = 1e-8


def _conjugate_partners(model: DmdModel) -> np.ndarray:
    """Index of each mode's conjugate partner (itself when none matches)."""
    eigs = model.discrete_eigs
    partners = np.arange(model.rank)
    for j in range(model.rank):
        dist = np.abs(eigs - np.conj(eigs[j]))
        k = int(np.argmin(dist))
        if dist[k] <= CONJUGATE_TOL * (1.0 + abs(eigs[j])):
            partners[j] = k
    return partners


def classify_modes(model: DmdModel, epsilon: float) -> tuple[set[int], set[int]]:
    """Split mode indices into (slow, fast) by relative frequency magnitude.

    A mode passes when |omega_j| <= epsilon * max_k |omega_k| (boundary
    inclusive); a conjugate pair is slow only when both members pass.  If
    every frequency is zero there is nothing fast, and all modes are slow
    by convention.
    """
    if not 0 < epsilon < 1:
        raise ValueError(f"epsilon must be in (0, 1), got {epsilon}")
    mags = np.abs(model.frequencies)
    peak = float(mags.max())
    if peak == 0.0:
        return set(range(model.rank)), set()
    passes = mags <= epsilon * peak
    partners = _conjugate_partners(model)
    slow = {j for j in range(model.rank) if passes[j] and passes[partners[j]]}
    fast = set(range(model.rank)) - slow
    return slow, fast


def lowrank_component(model: DmdModel, slow, times) -> np.ndarray:
    """Modal sum over the slow set, in embedded space (complex)."""
    return reconstruct(model, times, indices=slow)


def sparse_component(
    model: DmdModel,
    slow,
    times,
    method: str = "modal",
    data: np.ndarray | None = None,
) -> np.ndarray:
    """Fast-scale part of the signal, in embedded space (real).

    ``modal`` returns the real part of the modal sum over the fast set.
    ``residual`` returns ``data - |lowrank|`` elementwise, which requires
    the original data matrix evaluated on the same grid.
    """
    if method == "modal":
        fast = set(range(model.rank)) - set(slow)
        return reconstruct(model, times, indices=fast).real
    if method == "residual":
        if data is None:
            raise ShapeMismatch("residual method requires the original data matrix")
        data = np.asarray(data)
        low = lowrank_component(model, slow, times)
        if data.shape != low.shape:
            raise ShapeMismatch(
                f"data shape {data.shape} does not match reconstruction {low.shape}"
            )
        return data - np.abs(low)
    raise ValueError(f"unknown sparse method {method!r}")


def component_derivative(
    model: DmdModel,
    indices,
    times,
    n_delays: int,
    mode: str = "first-row",
) -> np.ndarray:
    """Exact time derivative of a modal component, in channel space.

    Differentiates each retained term analytically (multiply by omega_j),
    evaluates on ``times``, de-embeds, and returns the real part as an
    (m, n) array.  For a faithful channel signal, ``times`` should be the
    embedding's snapshot-column grid.
    """
    times = np.atleast_1d(np.asarray(times, dtype=float))
    idx = np.asarray(sorted(indices), dtype=int)
    if idx.size == 0:
        rows = model.modes.shape[0]
        m = rows // n_delays
        return np.zeros((m, n_delays + times.size - 1))
    weighted = model.modes[:, idx] * (model.amplitudes[idx] * model.frequencies[idx])
    argument = np.outer(model.frequencies[idx], times - model.t0)
    embedded = weighted @ np.exp(argument)
    return deembed(embedded, n_delays, mode=mode).real


def finite_difference_derivative(series: TimeSeries) -> TimeSeries:
    """Differentiate a series on its own grid by finite differences.

    Second-order central differences on the interior, second-order
    one-sided stencils at both ends.  Needed for residual-method
    components, which are not modal sums and have no exact derivative.
    """
    n = series.n_samples
    if n < 3:
        raise TooFewSamples(f"need at least 3 samples, got {n}")
    v = series.values
    dt = series.dt
    out = np.empty_like(v)
    out[:, 1:-1] = (v[:, 2:] - v[:, :-2]) / (2 * dt)
    out[:, 0] = (-3 * v[:, 0] + 4 * v[:, 1] - v[:, 2]) / (2 * dt)
    out[:, -1] = (3 * v[:, -1] - 4 * v[:, -2] + v[:, -3]) / (2 * dt)
    return TimeSeries(t0=series.t0, dt=dt, values=out)


@dataclass(frozen=True)
class ScaleSplit:
    """Slow/fast partition of a fitted model plus the rebuilt series.

    For the modal method, ``slow_series + fast_series`` equals the real
    part of the de-embedded full reconstruction; for the residual method
    the two parts sum to the original data exactly.
    """

    slow_indices: frozenset[int]
    fast_indices: frozenset[int]
    threshold: float
    slow_series: TimeSeries = field(repr=False)
    fast_series: TimeSeries = field(repr=False)
    method: str


def split_scales(
    model: DmdModel,
    embedding: HankelEmbedding,
    epsilon: float = DEFAULT_EPSILON,
    method: str = "modal",
    deembed_mode: str = "first-row",
) -> ScaleSplit:
    """Classify modes and rebuild the slow and fast series on the data grid."""
    slow, fast = classify_modes(model, epsilon)
    times = embedding.column_times
    low = lowrank_component(model, slow, times)
    if method == "modal":
        high = sparse_component(model, slow, times, method="modal")
        slow_mat = deembed(low, embedding.n_delays, mode=deembed_mode).real
        fast_mat = deembed(high, embedding.n_delays, mode=deembed_mode)
    elif method == "residual":
        high = sparse_component(
            model, slow, times, method="residual", data=embedding.matrix
        )
        slow_mat = deembed(np.abs(low), embedding.n_delays, mode=deembed_mode)
        fast_mat = deembed(high, embedding.n_delays, mode=deembed_mode)
    else:
        raise ValueError(f"unknown sparse method {method!r}")
    t0, dt = embedding.t0, embedding.dt
    return ScaleSplit(
        slow_indices=frozenset(slow),
        fast_indices=frozenset(fast),
        threshold=epsilon,
        slow_series=TimeSeries(t0=t0, dt=dt, values=slow_mat),
        fast_series=TimeSeries(t0=t0, dt=dt, values=fast_mat),
        method=method,
    )
