"""Hankel delay embedding of a trajectory and rank selection.

A scalar (or multichannel) series is lifted into a matrix whose columns
are time-shifted windows of the signal; the column space of that matrix
approximates the trajectory space of the underlying dynamics, and its
singular spectrum tells how many modes are worth keeping.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass, field

import numpy as np

from .errors import InvalidPolicyParameter, ShapeMismatch, TooFewSamples
from .series import TimeSeries


@dataclass(frozen=True)
class HankelEmbedding:
    """Delay-embedded trajectory matrix plus its singular spectrum.

    For a series with m channels and n samples, ``matrix`` has one
    N-row Hankel block per channel stacked vertically:

        matrix[c*N + i, j] = values[c, i + j],   0 <= i < N, 0 <= j < M

    with ``N = n_delays`` and ``M = n - N + 1`` columns.
    """

    n_delays: int
    matrix: np.ndarray = field(repr=False)
    dt: float
    t0: float
    singular_values: np.ndarray = field(repr=False)

    @property
    def n_channels(self) -> int:
        return self.matrix.shape[0] // self.n_delays

    @property
    def n_columns(self) -> int:
        return self.matrix.shape[1]

    @property
    def n_samples(self) -> int:
        """Length of the series the embedding was built from."""
        return self.n_delays + self.n_columns - 1

    @property
    def column_times(self) -> np.ndarray:
        """Times of the snapshot columns (first row of each block)."""
        return self.t0 + np.arange(self.n_columns) * self.dt


def build_hankel(series: TimeSeries, n_delays: int) -> HankelEmbedding:
    """Build the Hankel embedding of ``series`` with ``n_delays`` rows per channel.

    Raises TooFewSamples unless at least two columns remain
    (``n - n_delays + 1 >= 2``), so snapshot pairs exist downstream.
    """
    if n_delays < 1:
        raise TooFewSamples(f"n_delays must be >= 1, got {n_delays}")
    n = series.n_samples
    n_cols = n - n_delays + 1
    if n_cols < 2:
        raise TooFewSamples(
            f"series of {n} samples supports at most n_delays={n - 1}, got {n_delays}"
        )
    blocks = [
        np.lib.stride_tricks.sliding_window_view(series.values[c], n_cols)
        for c in range(series.n_channels)
    ]
    matrix = np.ascontiguousarray(np.vstack(blocks))
    sigma = np.linalg.svd(matrix, compute_uv=False)
    return HankelEmbedding(
        n_delays=n_delays,
        matrix=matrix,
        dt=series.dt,
        t0=series.t0,
        singular_values=sigma,
    )


@dataclass(frozen=True)
class FixedRank:
    """Keep exactly ``r`` modes (clamped to the available spectrum)."""

    r: int


@dataclass(frozen=True)
class RelativeCutoff:
    """Keep singular values with sigma_j >= tau * sigma_1."""

    tau: float


@dataclass(frozen=True)
class EnergyCutoff:
    """Keep the smallest r with sum_{j<=r} sigma_j^2 >= eta * total."""

    eta: float


RankPolicy = FixedRank | RelativeCutoff | EnergyCutoff

#: Default truncation policy: drop singular values below 1e-10 * sigma_1.
DEFAULT_RANK_POLICY = RelativeCutoff(1e-10)


def choose_rank(embedding: HankelEmbedding, policy: RankPolicy) -> int:
    """Pick a truncation rank from the embedding's singular spectrum."""
    sigma = embedding.singular_values
    count = sigma.size
    if isinstance(policy, FixedRank):
        if policy.r < 1:
            raise InvalidPolicyParameter(f"fixed rank must be >= 1, got {policy.r}")
        if policy.r > count:
            warnings.warn(
                f"requested rank {policy.r} exceeds the {count} available "
                f"singular values; clamping to {count}",
                stacklevel=2,
            )
            return count
        return policy.r
    if isinstance(policy, RelativeCutoff):
        if not 0 < policy.tau <= 1:
            raise InvalidPolicyParameter(f"tau must be in (0, 1], got {policy.tau}")
        if sigma[0] == 0:
            return 1
        return max(1, int(np.sum(sigma >= policy.tau * sigma[0])))
    if isinstance(policy, EnergyCutoff):
        if not 0 < policy.eta <= 1:
            raise InvalidPolicyParameter(f"eta must be in (0, 1], got {policy.eta}")
        cum = np.cumsum(sigma**2)
        if cum[-1] == 0:
            return 1
        return int(np.searchsorted(cum, policy.eta * cum[-1]) + 1)
    raise InvalidPolicyParameter(f"unknown rank policy {policy!r}")


def deembed(matrix: np.ndarray, n_delays: int, mode: str = "first-row") -> np.ndarray:
    """Invert the Hankel embedding, returning an (m, N + M - 1) array.

    ``first-row`` takes, per channel block, row 0 followed by the last
    column's remaining entries; it is exact on true Hankel matrices.
    ``antidiagonal-average`` averages each antidiagonal per block, which
    spreads perturbations and suits noisy reconstructions.
    """
    matrix = np.asarray(matrix)
    if matrix.ndim != 2:
        raise ShapeMismatch(f"expected a 2-D matrix, got ndim={matrix.ndim}")
    rows, n_cols = matrix.shape
    if n_delays < 1 or rows % n_delays != 0:
        raise ShapeMismatch(
            f"{rows} rows are not a whole number of {n_delays}-row channel blocks"
        )
    if n_cols < 1:
        raise ShapeMismatch("matrix has no columns")
    m = rows // n_delays
    n = n_delays + n_cols - 1
    out = np.empty((m, n), dtype=matrix.dtype)
    if mode == "first-row":
        for c in range(m):
            block = matrix[c * n_delays : (c + 1) * n_delays]
            out[c, :n_cols] = block[0]
            out[c, n_cols:] = block[1:, -1]
    elif mode == "antidiagonal-average":
        idx = (np.arange(n_delays)[:, None] + np.arange(n_cols)[None, :]).ravel()
        counts = np.bincount(idx, minlength=n)
        for c in range(m):
            block = matrix[c * n_delays : (c + 1) * n_delays]
            if np.iscomplexobj(matrix):
                sums = np.bincount(idx, weights=block.real.ravel(), minlength=n) + (
                    1j * np.bincount(idx, weights=block.imag.ravel(), minlength=n)
                )
            else:
                sums = np.bincount(idx, weights=block.ravel(), minlength=n)
            out[c] = sums / counts
    else:
        raise ValueError(f"unknown de-embedding mode {mode!r}")
    return out
