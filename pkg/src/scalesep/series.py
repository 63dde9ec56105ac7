"""Uniformly sampled multichannel time series."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np


@dataclass(frozen=True)
class TimeSeries:
    """A trajectory sampled on the uniform grid ``t_k = t0 + k*dt``.

    Parameters
    ----------
    t0 : float
        Time of the first sample (s).
    dt : float
        Sample spacing (s), strictly positive.
    values : ndarray, shape (m, n)
        One row per channel, one column per sample. A 1-D array is
        promoted to a single channel. The array is copied and frozen,
        so a TimeSeries is safe to share across threads.
    """

    t0: float
    dt: float
    values: np.ndarray = field(repr=False)

    def __post_init__(self):
        values = np.array(self.values, dtype=float, order="C")
        if values.ndim == 1:
            values = values[np.newaxis, :]
        if values.ndim != 2:
            raise ValueError(f"values must be 1-D or 2-D, got ndim={values.ndim}")
        if values.shape[1] < 2:
            raise ValueError(f"need at least 2 samples, got {values.shape[1]}")
        if not np.isfinite(self.dt) or self.dt <= 0:
            raise ValueError(f"dt must be positive, got {self.dt}")
        values.flags.writeable = False
        object.__setattr__(self, "t0", float(self.t0))
        object.__setattr__(self, "dt", float(self.dt))
        object.__setattr__(self, "values", values)

    @property
    def n_channels(self) -> int:
        return self.values.shape[0]

    @property
    def n_samples(self) -> int:
        return self.values.shape[1]

    @property
    def t_end(self) -> float:
        """Time of the last sample."""
        return self.times[-1]

    @property
    def times(self) -> np.ndarray:
        """The sample grid, computed as ``t0 + k*dt`` per sample."""
        return self.t0 + np.arange(self.n_samples) * self.dt

    def channel(self, index: int) -> np.ndarray:
        """Return one channel as a 1-D (read-only) array."""
        return self.values[index]

    def __eq__(self, other) -> bool:
        if not isinstance(other, TimeSeries):
            return NotImplemented
        return (
            self.t0 == other.t0
            and self.dt == other.dt
            and self.values.shape == other.values.shape
            and bool(np.all(self.values == other.values))
        )
