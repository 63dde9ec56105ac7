"""Dynamic mode decomposition of snapshot matrices.

Fits the best-fit linear propagator between two time-shifted snapshot
matrices through a truncated SVD, and represents the trajectory as

    x(t) ~= sum_j  b_j * phi_j * exp(omega_j * (t - t0))

with unit-norm modes ``phi_j``, continuous-time frequencies
``omega_j = log(lambda_j) / dt`` on the principal branch, and amplitudes
``b`` fitted to the first snapshot by least squares.  Frequencies are
identifiable only up to the Nyquist limit ``pi / dt``.
"""

from __future__ import annotations

import os
import warnings
from dataclasses import dataclass, field

import numpy as np

from .embedding import HankelEmbedding
from .errors import (
    EigenFailure,
    IoFailure,
    MalformedNumber,
    RankTooLarge,
    ShapeMismatch,
    SingularTruncation,
    TooFewColumns,
)

#: Smallest sigma_rank / sigma_1 ratio a fit will accept.  Below this the
#: pseudo-inverse amplifies floating-point noise instead of signal.
SINGULAR_FLOOR = 1e-14

#: |omega * (t - t0)| beyond which exp() is at risk of overflow.
OVERFLOW_LIMIT = 700.0

_FMT = "%.17g"


@dataclass(frozen=True)
class DmdModel:
    """A rank-ell decomposition of a snapshot sequence.

    Attributes
    ----------
    rank : int
        Number of retained modes (ell).
    modes : complex ndarray, shape (rows, ell)
        Unit 2-norm mode shapes; scale lives in ``amplitudes``.
    discrete_eigs : complex ndarray, shape (ell,)
        One-step eigenvalues lambda_j of the fitted propagator.
    frequencies : complex ndarray, shape (ell,)
        omega_j = log(lambda_j) / dt, principal branch.
    amplitudes : complex ndarray, shape (ell,)
        Least-squares weights against the first snapshot.
    dt : float
        Snapshot spacing (s).
    t0 : float
        Time of the first snapshot (s).
    """

    rank: int
    modes: np.ndarray = field(repr=False)
    discrete_eigs: np.ndarray = field(repr=False)
    frequencies: np.ndarray = field(repr=False)
    amplitudes: np.ndarray = field(repr=False)
    dt: float
    t0: float

    def __post_init__(self):
        for name in ("modes", "discrete_eigs", "frequencies", "amplitudes"):
            arr = np.asarray(getattr(self, name), dtype=complex)
            arr.flags.writeable = False
            object.__setattr__(self, name, arr)
        if self.modes.shape[1] != self.rank:
            raise ShapeMismatch(
                f"modes have {self.modes.shape[1]} columns, rank is {self.rank}"
            )


def split_snapshots(embedding: HankelEmbedding) -> tuple[np.ndarray, np.ndarray]:
    """Split an embedding into time-shifted snapshot matrices.

    Returns ``(X1, X2)`` where X1 drops the last column and X2 drops the
    first, so column j of X2 is the one-step advance of column j of X1.
    """
    if embedding.n_columns < 2:
        raise TooFewColumns(
            f"embedding has {embedding.n_columns} column(s), need at least 2"
        )
    return embedding.matrix[:, :-1], embedding.matrix[:, 1:]


def valid_rank_limit(singular_values: np.ndarray) -> int:
    """Largest truncation rank whose singular value clears SINGULAR_FLOOR."""
    sigma = np.asarray(singular_values, dtype=float)
    if sigma.size == 0 or sigma[0] == 0:
        return 0
    return int(np.sum(sigma > SINGULAR_FLOOR * sigma[0]))


def fit(
    x1: np.ndarray,
    x2: np.ndarray,
    rank: int,
    dt: float,
    t0: float = 0.0,
    exact_modes: bool = False,
) -> DmdModel:
    """Fit a rank-``rank`` DMD model to the snapshot pair ``(x1, x2)``.

    The reduced propagator is ``U* X2 V inv(S)`` from the truncated SVD
    ``X1 ~= U S V*``.  Modes are the projected ones ``U W`` (eigenvectors
    W of the reduced propagator) by default; ``exact_modes=True`` maps
    them through ``X2 V inv(S) W`` instead.  Columns are normalized to
    unit 2-norm and sorted by ascending |omega|, conjugate pairs adjacent.

    Raises RankTooLarge when rank exceeds min(x1.shape), and
    SingularTruncation when sigma_rank / sigma_1 <= SINGULAR_FLOOR: a
    truncation below the noise floor would fit rounding noise, not
    dynamics (see ``valid_rank_limit``).
    """
    x1 = np.asarray(x1)
    x2 = np.asarray(x2)
    if x1.shape != x2.shape:
        raise ShapeMismatch(f"snapshot shapes differ: {x1.shape} vs {x2.shape}")
    if x1.ndim != 2 or min(x1.shape) < 1:
        raise ShapeMismatch(f"need a 2-D snapshot matrix, got shape {x1.shape}")
    if not 1 <= rank <= min(x1.shape):
        raise RankTooLarge(f"rank {rank} not in [1, {min(x1.shape)}]")
    try:
        u, sigma, vh = np.linalg.svd(x1, full_matrices=False)
    except np.linalg.LinAlgError as exc:
        raise EigenFailure(f"SVD failed: {exc}") from exc
    if sigma[0] == 0 or sigma[rank - 1] <= SINGULAR_FLOOR * sigma[0]:
        raise SingularTruncation(
            f"sigma_{rank}/sigma_1 = "
            f"{sigma[rank - 1] / sigma[0] if sigma[0] else 0:.3e} is at or below "
            f"the {SINGULAR_FLOOR:g} floor; numerically supported rank is "
            f"{valid_rank_limit(sigma)}"
        )
    u_r = u[:, :rank]
    s_r = sigma[:rank]
    v_r = vh[:rank].conj().T
    x2_v_sinv = (x2 @ v_r) / s_r
    reduced = u_r.conj().T @ x2_v_sinv
    try:
        eigs, w = np.linalg.eig(reduced)
    except np.linalg.LinAlgError as exc:
        raise EigenFailure(f"eigendecomposition failed: {exc}") from exc
    if np.any(eigs == 0):
        raise EigenFailure("zero eigenvalue: continuous frequency undefined")
    phi = (x2_v_sinv @ w) if exact_modes else (u_r @ w)
    norms = np.linalg.norm(phi, axis=0)
    if np.any(norms == 0):
        raise EigenFailure("degenerate (zero-norm) mode")
    phi = phi / norms
    omega = np.log(eigs) / dt
    b, *_ = np.linalg.lstsq(phi, x1[:, 0].astype(complex), rcond=None)
    order = np.lexsort((omega.imag, omega.real, np.abs(omega)))
    return DmdModel(
        rank=rank,
        modes=phi[:, order],
        discrete_eigs=eigs[order],
        frequencies=omega[order],
        amplitudes=b[order],
        dt=float(dt),
        t0=float(t0),
    )


def fit_embedding(
    embedding: HankelEmbedding, rank: int, exact_modes: bool = False
) -> DmdModel:
    """Convenience wrapper: split an embedding and fit at the given rank."""
    x1, x2 = split_snapshots(embedding)
    return fit(x1, x2, rank, dt=embedding.dt, t0=embedding.t0, exact_modes=exact_modes)


def reconstruct(
    model: DmdModel,
    times,
    indices=None,
) -> np.ndarray:
    """Evaluate the modal sum at the given times.

    Returns a complex (rows, len(times)) matrix whose column k is
    ``sum_j b_j phi_j exp(omega_j (times[k] - t0))``, summed over
    ``indices`` (default: all modes).  Each mode is propagated through
    its own exponential; no dense matrix powers are formed.  If any
    |omega_j (t - t0)| exceeds OVERFLOW_LIMIT a RuntimeWarning is issued
    and the affected entries saturate to inf per IEEE semantics.
    """
    times = np.atleast_1d(np.asarray(times, dtype=float))
    if indices is None:
        idx = np.arange(model.rank)
    else:
        idx = np.asarray(sorted(indices), dtype=int)
    if idx.size == 0:
        return np.zeros((model.modes.shape[0], times.size), dtype=complex)
    dtau = times - model.t0
    argument = np.outer(model.frequencies[idx], dtau)
    worst = np.max(np.abs(argument))
    if worst > OVERFLOW_LIMIT:
        warnings.warn(
            f"max |omega * (t - t0)| = {worst:.3g} exceeds {OVERFLOW_LIMIT:g}; "
            "exponentials may overflow",
            RuntimeWarning,
            stacklevel=2,
        )
    weighted = model.modes[:, idx] * model.amplitudes[idx]
    return weighted @ np.exp(argument)


# --- CSV bundle serialization ----------------------------------------------

_META = "dmd_meta.csv"
_SPECTRUM = "dmd_spectrum.csv"
_MODES = "dmd_modes.csv"


def save_model(model: DmdModel, directory: str) -> None:
    """Write a model as a three-file CSV bundle under ``directory``.

    ``dmd_meta.csv`` holds rank/dt/t0/row count, ``dmd_spectrum.csv`` one
    row per mode (eigenvalue, frequency, amplitude as re/im pairs), and
    ``dmd_modes.csv`` the mode matrix, one column pair per mode.  All
    floats carry 17 significant digits, so loading is exact.
    """
    os.makedirs(directory, exist_ok=True)
    try:
        with open(os.path.join(directory, _META), "w", encoding="utf-8") as fh:
            fh.write("rank,rows,dt,t0\n")
            fh.write(
                f"{model.rank},{model.modes.shape[0]},"
                f"{_FMT % model.dt},{_FMT % model.t0}\n"
            )
        with open(os.path.join(directory, _SPECTRUM), "w", encoding="utf-8") as fh:
            fh.write("mode,eig_re,eig_im,omega_re,omega_im,amp_re,amp_im\n")
            for j in range(model.rank):
                row = (
                    model.discrete_eigs[j].real,
                    model.discrete_eigs[j].imag,
                    model.frequencies[j].real,
                    model.frequencies[j].imag,
                    model.amplitudes[j].real,
                    model.amplitudes[j].imag,
                )
                fh.write(str(j) + "," + ",".join(_FMT % x for x in row) + "\n")
        with open(os.path.join(directory, _MODES), "w", encoding="utf-8") as fh:
            headers = []
            for j in range(model.rank):
                headers += [f"mode{j}_re", f"mode{j}_im"]
            fh.write(",".join(headers) + "\n")
            for i in range(model.modes.shape[0]):
                fields = []
                for j in range(model.rank):
                    fields += [_FMT % model.modes[i, j].real, _FMT % model.modes[i, j].imag]
                fh.write(",".join(fields) + "\n")
    except OSError as exc:
        raise IoFailure(f"cannot write model bundle to {directory}: {exc}") from exc


def load_model(directory: str) -> DmdModel:
    """Read a model bundle written by ``save_model``."""

    def read_rows(name):
        path = os.path.join(directory, name)
        try:
            with open(path, "r", encoding="utf-8") as fh:
                lines = [ln.strip() for ln in fh if ln.strip()]
        except OSError as exc:
            raise IoFailure(f"cannot read {path}: {exc}") from exc
        return [ln.split(",") for ln in lines[1:]]

    try:
        meta = read_rows(_META)[0]
        rank, rows = int(meta[0]), int(meta[1])
        dt, t0 = float(meta[2]), float(meta[3])
        spectrum = read_rows(_SPECTRUM)
        eigs = np.array([complex(float(r[1]), float(r[2])) for r in spectrum])
        omega = np.array([complex(float(r[3]), float(r[4])) for r in spectrum])
        amps = np.array([complex(float(r[5]), float(r[6])) for r in spectrum])
        mode_rows = read_rows(_MODES)
        modes = np.empty((rows, rank), dtype=complex)
        for i, r in enumerate(mode_rows):
            for j in range(rank):
                modes[i, j] = complex(float(r[2 * j]), float(r[2 * j + 1]))
    except (IndexError, ValueError) as exc:
        raise MalformedNumber(f"corrupt model bundle in {directory}: {exc}") from exc
    return DmdModel(
        rank=rank,
        modes=modes,
        discrete_eigs=eigs,
        frequencies=omega,
        amplitudes=amps,
        dt=dt,
        t0=t0,
    )
