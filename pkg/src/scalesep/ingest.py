"""Load, validate, and write uniformly sampled time-series data.

Two on-disk formats are supported:

* CSV: UTF-8, comma-delimited, one header row, decimal floats written
  with 17 significant digits (enough to round-trip a double exactly).
* Gauge files: ASCII, ``#``-prefixed comment lines, whitespace-separated
  numeric columns with column 0 holding the time stamps.

Input grids must be uniform: resampling would change the spectrum every
downstream stage estimates, so non-uniform input fails loudly instead.
"""

from __future__ import annotations

import csv
import os

import numpy as np

from .errors import (
    ColumnOutOfRange,
    EmptyGauge,
    GridMismatch,
    IoFailure,
    MalformedNumber,
    MissingColumn,
    NonUniformGrid,
)
from .series import TimeSeries

# Relative deviation of any gap from the common step that still counts
# as a uniform grid.
GRID_RTOL = 1e-8

_FMT = "%.17g"


def _recover_step(t: np.ndarray) -> float:
    """Estimate the grid step of a time column.

    Starts from the median of successive differences and refines it so
    that, whenever the column was generated as ``t0 + k*step`` in double
    precision, the exact ``step`` is recovered.  The refinement walks the
    float lattice downhill on the L1 deviation between the column and the
    grid a candidate step regenerates; the deviation is zero only at a
    step that reproduces the column bit for bit.
    """
    n = t.size
    if n == 2:
        return float(t[1] - t[0])
    k = np.arange(n)
    rel = t - t[0]
    diffs = np.diff(t)

    def l1(c: float) -> float:
        return float(np.abs(t - (t[0] + k * c)).sum())

    lo, hi = float(diffs.min()), float(diffs.max())
    if lo == hi:
        best = lo
    else:
        # Convex minimax fit of a straight grid through the column;
        # narrows the search to sub-ulp scale before the lattice walk.
        pad = hi - lo
        lo, hi = lo - pad, hi + pad
        for _ in range(200):
            m1 = lo + (hi - lo) / 3
            m2 = hi - (hi - lo) / 3
            if np.max(np.abs(rel - k * m1)) <= np.max(np.abs(rel - k * m2)):
                hi = m2
            else:
                lo = m1
        cands = [0.5 * (lo + hi), float(np.median(diffs)), float((t[-1] - t[0]) / (n - 1))]
        best = min(cands, key=l1)
    for _ in range(4096):
        up = np.nextafter(best, np.inf)
        dn = np.nextafter(best, -np.inf)
        step = best
        if l1(up) < l1(step):
            step = up
        if l1(dn) < l1(step):
            step = dn
        if step == best:
            break
        best = step
    return best


def _validate_uniform(t: np.ndarray, where: str) -> float:
    """Return the grid step, or raise NonUniformGrid with the worst index."""
    if np.any(np.diff(t) <= 0):
        bad = int(np.argmax(np.diff(t) <= 0))
        raise NonUniformGrid(
            f"{where}: time not strictly increasing at row {bad + 1} (t={t[bad + 1]!r})"
        )
    dt = _recover_step(t)
    dev = np.abs(np.diff(t) - dt)
    worst = int(np.argmax(dev))
    if dev[worst] > GRID_RTOL * dt:
        raise NonUniformGrid(
            f"{where}: gap at index {worst} is {t[worst + 1] - t[worst]!r}, "
            f"expected {dt!r} (tolerance {GRID_RTOL:g} relative)"
        )
    return dt


def load_csv(path: str, time_column: str = "t") -> TimeSeries:
    """Read a CSV file with a header row into a TimeSeries.

    The named time column must be strictly increasing and uniform within
    ``GRID_RTOL``; every other column becomes a channel, in header order.
    """
    try:
        with open(path, "r", encoding="utf-8", newline="") as fh:
            rows = list(csv.reader(fh))
    except OSError as exc:
        raise IoFailure(f"cannot read {path}: {exc}") from exc
    rows = [r for r in rows if r and any(field.strip() for field in r)]
    if not rows:
        raise MalformedNumber(f"{path}: empty file")
    header = [h.strip() for h in rows[0]]
    if time_column not in header:
        raise MissingColumn(f"{path}: no column named {time_column!r} in {header}")
    t_col = header.index(time_column)
    data = np.empty((len(rows) - 1, len(header)))
    for i, row in enumerate(rows[1:]):
        if len(row) != len(header):
            raise MalformedNumber(
                f"{path}: row {i + 2} has {len(row)} fields, expected {len(header)}"
            )
        for j, fieldval in enumerate(row):
            try:
                data[i, j] = float(fieldval)
            except ValueError as exc:
                raise MalformedNumber(
                    f"{path}: row {i + 2}, column {header[j]!r}: {fieldval!r}"
                ) from exc
    if data.shape[0] < 2:
        raise NonUniformGrid(f"{path}: need at least 2 rows to establish a grid")
    t = data[:, t_col]
    dt = _validate_uniform(t, path)
    channels = np.delete(data, t_col, axis=1).T
    return TimeSeries(t0=float(t[0]), dt=dt, values=channels)


def write_csv(series: TimeSeries, path: str, headers: list[str] | None = None) -> None:
    """Write a TimeSeries as CSV, one row per sample.

    ``headers`` names the time column followed by each channel
    (``m + 1`` entries); defaults to ``t, ch1, ..., chm``.  Values are
    written with 17 significant digits, so ``load_csv`` of the output
    reproduces the input exactly.
    """
    m = series.n_channels
    if headers is None:
        headers = ["t"] + [f"ch{i + 1}" for i in range(m)]
    if len(headers) != m + 1:
        raise ValueError(f"need {m + 1} headers, got {len(headers)}")
    times = series.times
    try:
        with open(path, "w", encoding="utf-8", newline="") as fh:
            fh.write(",".join(headers) + "\n")
            for k in range(series.n_samples):
                fields = [_FMT % times[k]]
                fields += [_FMT % series.values[c, k] for c in range(m)]
                fh.write(",".join(fields) + "\n")
    except OSError as exc:
        raise IoFailure(f"cannot write {path}: {exc}") from exc


def _parse_gauge(path: str) -> np.ndarray:
    """Parse one gauge file into an (n_rows, n_cols) array."""
    try:
        with open(path, "r", encoding="utf-8") as fh:
            lines = fh.readlines()
    except OSError as exc:
        raise IoFailure(f"cannot read {path}: {exc}") from exc
    rows = []
    width = None
    for lineno, line in enumerate(lines, start=1):
        stripped = line.strip()
        if not stripped or stripped.startswith("#"):
            continue
        fields = stripped.split()
        if width is None:
            width = len(fields)
        elif len(fields) != width:
            raise MalformedNumber(
                f"{path}: line {lineno} has {len(fields)} fields, expected {width}"
            )
        try:
            rows.append([float(f) for f in fields])
        except ValueError as exc:
            raise MalformedNumber(f"{path}: line {lineno}: {stripped!r}") from exc
    if len(rows) < 2:
        raise EmptyGauge(f"{path}: {len(rows)} data line(s), need at least 2")
    return np.asarray(rows)


def load_gauges(paths: list[str], channel_index: int) -> TimeSeries:
    """Assemble one TimeSeries from a list of gauge files.

    Channel ``g`` of the result is data column ``channel_index`` of gauge
    ``g`` (0-based, not counting the time column).  All gauges must share
    an identical time grid.
    """
    if not paths:
        raise EmptyGauge("no gauge files given")
    tables = [_parse_gauge(p) for p in paths]
    ref_t = tables[0][:, 0]
    for p, tab in zip(paths, tables):
        if tab.shape[1] < 2:
            raise ColumnOutOfRange(f"{p}: no data columns beside time")
        if channel_index < 0 or channel_index >= tab.shape[1] - 1:
            raise ColumnOutOfRange(
                f"{p}: channel {channel_index} out of range "
                f"(file has {tab.shape[1] - 1} data columns)"
            )
        t = tab[:, 0]
        if t.shape != ref_t.shape or not np.array_equal(t, ref_t):
            if t.shape != ref_t.shape:
                raise GridMismatch(
                    f"{p}: {t.size} samples, expected {ref_t.size} (from {paths[0]})"
                )
            bad = int(np.argmax(t != ref_t))
            raise GridMismatch(
                f"{p}: time grid differs from {paths[0]} first at row {bad} "
                f"({t[bad]!r} vs {ref_t[bad]!r})"
            )
    dt = _validate_uniform(ref_t, paths[0])
    values = np.stack([tab[:, channel_index + 1] for tab in tables])
    return TimeSeries(t0=float(ref_t[0]), dt=dt, values=values)


def gauge_id(path: str) -> str:
    """Short label for a gauge file (basename without extension)."""
    return os.path.splitext(os.path.basename(path))[0]
