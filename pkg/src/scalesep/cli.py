"""Command-line pipeline: embed, decompose, separate, and solve.

Subcommands
-----------
toy
    Run the built-in two-scale test problem end to end: generate data,
    fit the decomposition, split scales, export every stage as CSV, then
    solve the ODE again from the exported component files and report the
    deviation from the closed-form solution.
separate
    Run the embedding/decomposition/separation pipeline on a CSV file or
    a set of gauge files.
solve
    Integrate y' = fs(t) + ff(t) from two exported component CSVs with
    the multirate splitting solver.
dmd fit / dmd reconstruct
    Fit a decomposition and store it as a CSV bundle; rebuild the
    training-grid reconstruction from a stored bundle.

Exit codes: 0 success (warnings allowed), 2 input error, 3 numeric
failure.  All outputs are plain CSV so any plotting tool can render
them; repeated runs on identical inputs produce identical files.
"""

from __future__ import annotations

import argparse
import csv
import os
import sys
import warnings

import numpy as np

from . import dmd as dmd_mod
from . import solver as solver_mod
from .embedding import (
    DEFAULT_RANK_POLICY,
    EnergyCutoff,
    FixedRank,
    HankelEmbedding,
    RelativeCutoff,
    build_hankel,
    choose_rank,
    deembed,
)
from .errors import InputError, IoFailure, NumericError
from .ingest import gauge_id, load_csv, load_gauges, write_csv
from .rhs import TabulatedRhs
from .separation import (
    DEFAULT_EPSILON,
    component_derivative,
    finite_difference_derivative,
    split_scales,
)
from .series import TimeSeries

#: Reconstruction error above which the pipeline warns that the chosen
#: rank cannot represent the data.
RECON_WARN_THRESHOLD = 1e-3

_PIPELINE_META = "pipeline_meta.csv"


# --- small CSV helpers ------------------------------------------------------

def _write_table(path, headers, columns):
    columns = [np.asarray(c) for c in columns]
    with open(path, "w", encoding="utf-8", newline="") as fh:
        fh.write(",".join(headers) + "\n")
        for k in range(columns[0].size):
            fh.write(",".join("%.17g" % c[k] for c in columns) + "\n")


def _csv_channel_names(path, time_column):
    try:
        with open(path, "r", encoding="utf-8", newline="") as fh:
            header = next(csv.reader(fh))
    except (OSError, StopIteration):
        return None
    return [h.strip() for h in header if h.strip() != time_column]


def _series_headers(names, m):
    if names is None or len(names) != m:
        names = [f"ch{i + 1}" for i in range(m)]
    return ["t"] + list(names)


# --- pipeline stages --------------------------------------------------------

def _load_input(args) -> tuple[TimeSeries, list[str] | None]:
    if getattr(args, "gauge", None):
        series = load_gauges(args.gauge, args.channel)
        return series, [gauge_id(p) for p in args.gauge]
    series = load_csv(args.input, time_column=args.time_column)
    return series, _csv_channel_names(args.input, args.time_column)


def _rank_policy(args, default_rank):
    if args.rank is not None:
        return FixedRank(args.rank)
    if args.rank_rel is not None:
        return RelativeCutoff(args.rank_rel)
    if args.rank_energy is not None:
        return EnergyCutoff(args.rank_energy)
    if default_rank is not None:
        return FixedRank(default_rank)
    return DEFAULT_RANK_POLICY


def _fit_with_clamp(embedding: HankelEmbedding, policy):
    """choose_rank, then clamp to the numerically supported spectrum."""
    rank = choose_rank(embedding, policy)
    limit = dmd_mod.valid_rank_limit(embedding.singular_values)
    if limit < 1:
        raise NumericError("input data is identically zero; nothing to fit")
    if rank > limit:
        warnings.warn(
            f"rank {rank} reaches below the numerical noise floor of the "
            f"singular spectrum; using the supported rank {limit} instead"
        )
        rank = limit
    return dmd_mod.fit_embedding(embedding, rank)


def _write_spectrum(outdir, embedding):
    sigma = embedding.singular_values
    _write_table(
        os.path.join(outdir, "singular_values.csv"),
        ["index", "sigma"],
        [np.arange(sigma.size), sigma],
    )


def _write_mode_table(outdir, model, slow):
    with open(os.path.join(outdir, "modes.csv"), "w", encoding="utf-8") as fh:
        fh.write("mode,omega_re,omega_im,abs_amplitude,scale\n")
        for j in range(model.rank):
            scale = "slow" if j in slow else "fast"
            fh.write(
                f"{j},{'%.17g' % model.frequencies[j].real},"
                f"{'%.17g' % model.frequencies[j].imag},"
                f"{'%.17g' % abs(model.amplitudes[j])},{scale}\n"
            )


def _reconstruction_outputs(outdir, series, embedding, model, headers):
    recon_embedded = dmd_mod.reconstruct(model, embedding.column_times)
    recon = deembed(recon_embedded, embedding.n_delays).real
    err = np.abs(series.values - recon)
    t = series.times
    m = series.n_channels
    data_cols = [series.values[c] for c in range(m)]
    recon_cols = [recon[c] for c in range(m)]
    _write_table(
        os.path.join(outdir, "reconstruction.csv"),
        ["t"] + [f"data_{h}" for h in headers[1:]] + [f"dmd_{h}" for h in headers[1:]],
        [t] + data_cols + recon_cols,
    )
    _write_table(
        os.path.join(outdir, "reconstruction_error.csv"),
        ["t"] + [f"err_{h}" for h in headers[1:]],
        [t] + [err[c] for c in range(m)],
    )
    max_err = float(err.max())
    if max_err > RECON_WARN_THRESHOLD:
        warnings.warn(
            f"reconstruction error {max_err:.3g} exceeds "
            f"{RECON_WARN_THRESHOLD:g}; the truncation rank may be too small "
            "to capture the dynamics"
        )
    return max_err


def _component_outputs(outdir, series, embedding, model, args, headers):
    split = split_scales(
        model, embedding, epsilon=args.epsilon, method=args.sparse_method
    )
    write_csv(split.slow_series, os.path.join(outdir, "slow_component.csv"), headers)
    write_csv(split.fast_series, os.path.join(outdir, "fast_component.csv"), headers)
    times = embedding.column_times
    if args.sparse_method == "modal" and args.derivative_method == "modal":
        fs_vals = component_derivative(
            model, split.slow_indices, times, embedding.n_delays
        )
        ff_vals = component_derivative(
            model, split.fast_indices, times, embedding.n_delays
        )
        fs = TimeSeries(t0=series.t0, dt=series.dt, values=fs_vals)
        ff = TimeSeries(t0=series.t0, dt=series.dt, values=ff_vals)
    else:
        # residual components are not modal sums; differentiate the series
        fs = finite_difference_derivative(split.slow_series)
        ff = finite_difference_derivative(split.fast_series)
    write_csv(fs, os.path.join(outdir, "slow_derivative.csv"), headers)
    write_csv(ff, os.path.join(outdir, "fast_derivative.csv"), headers)
    _write_mode_table(outdir, model, split.slow_indices)
    return split


def _run_pipeline(series, args, headers, outdir):
    embedding = build_hankel(series, args.delays)
    _write_spectrum(outdir, embedding)
    model = _fit_with_clamp(embedding, _rank_policy(args, args.default_rank))
    max_err = _reconstruction_outputs(outdir, series, embedding, model, headers)
    split = _component_outputs(outdir, series, embedding, model, args, headers)
    print(f"rank {model.rank}, reconstruction max error {max_err:.6g}")
    print(f"slow modes: {sorted(split.slow_indices)}")
    print(f"fast modes: {sorted(split.fast_indices)}")
    return embedding, model, split


# --- subcommands ------------------------------------------------------------

def cmd_toy(args) -> int:
    outdir = args.outdir
    os.makedirs(outdir, exist_ok=True)
    series = solver_mod.generate_toy(t_end=args.t_end, dt=args.dt, y0=args.y0)
    headers = ["t", "y"]
    write_csv(series, os.path.join(outdir, "toy_solution.csv"), headers)
    _run_pipeline(series, args, headers, outdir)

    fs = TabulatedRhs(
        load_csv(os.path.join(outdir, "slow_derivative.csv")), args.interp
    )
    ff = TabulatedRhs(
        load_csv(os.path.join(outdir, "fast_derivative.csv")), args.interp
    )
    result = solver_mod.solve_multirate(
        fs, ff, args.y0, series.t0, series.t_end, args.H, args.substeps, args.scheme
    )
    write_csv(
        result.solution, os.path.join(outdir, "multirate_solution.csv"), headers
    )
    t_out = result.solution.times
    deviation = np.abs(result.solution.values[0] - solver_mod.toy_closed_form(t_out, args.y0))
    _write_table(
        os.path.join(outdir, "solution_error.csv"), ["t", "abs_error"], [t_out, deviation]
    )
    print(
        f"multirate solve: {result.slow_steps} slow steps x "
        f"{result.fast_substeps_per_slow} substeps ({result.scheme})"
    )
    print(f"solution max deviation from closed form: {deviation.max():.6g}")
    return 0


def cmd_separate(args) -> int:
    outdir = args.outdir
    os.makedirs(outdir, exist_ok=True)
    series, names = _load_input(args)
    headers = _series_headers(names, series.n_channels)
    _run_pipeline(series, args, headers, outdir)
    return 0


def cmd_solve(args) -> int:
    fs = TabulatedRhs(load_csv(args.slow_rhs, args.time_column), args.interp)
    ff = TabulatedRhs(load_csv(args.fast_rhs, args.time_column), args.interp)
    t0 = max(fs.t_start, ff.t_start) if args.t0 is None else args.t0
    t_end = min(fs.t_end, ff.t_end) if args.tend is None else args.tend
    result = solver_mod.solve_multirate(
        fs, ff, args.y0, t0, t_end, args.H, args.substeps, args.scheme
    )
    write_csv(result.solution, args.output, ["t", "y"])
    print(
        f"{result.scheme}: {result.slow_steps} slow steps x "
        f"{result.fast_substeps_per_slow} substeps -> {args.output}"
    )
    return 0


def cmd_dmd_fit(args) -> int:
    outdir = args.outdir
    os.makedirs(outdir, exist_ok=True)
    series, _ = _load_input(args)
    embedding = build_hankel(series, args.delays)
    _write_spectrum(outdir, embedding)
    model = _fit_with_clamp(embedding, _rank_policy(args, None))
    dmd_mod.save_model(model, outdir)
    with open(os.path.join(outdir, _PIPELINE_META), "w", encoding="utf-8") as fh:
        fh.write("n_delays,n_columns,n_channels\n")
        fh.write(f"{embedding.n_delays},{embedding.n_columns},{series.n_channels}\n")
    print(f"fitted rank {model.rank} model -> {outdir}")
    return 0


def cmd_dmd_reconstruct(args) -> int:
    model = dmd_mod.load_model(args.model)
    meta_path = os.path.join(args.model, _PIPELINE_META)
    try:
        with open(meta_path, "r", encoding="utf-8") as fh:
            rows = list(csv.reader(fh))
        n_delays, n_columns, m = (int(x) for x in rows[1])
    except (OSError, IndexError, ValueError) as exc:
        raise IoFailure(f"missing or corrupt {meta_path}: {exc}") from exc
    times = model.t0 + np.arange(n_columns) * model.dt
    recon = deembed(dmd_mod.reconstruct(model, times), n_delays).real
    series = TimeSeries(t0=model.t0, dt=model.dt, values=recon)
    os.makedirs(args.outdir, exist_ok=True)
    out = os.path.join(args.outdir, "reconstruction.csv")
    write_csv(series, out, _series_headers(None, m))
    print(f"reconstruction ({m} channel(s), {series.n_samples} samples) -> {out}")
    return 0


# --- argument parsing ---------------------------------------------------------

def _add_rank_flags(p):
    group = p.add_mutually_exclusive_group()
    group.add_argument("--rank", type=int, help="fixed truncation rank")
    group.add_argument(
        "--rank-rel", type=float, metavar="TAU",
        help="keep singular values >= TAU * sigma_1",
    )
    group.add_argument(
        "--rank-energy", type=float, metavar="ETA",
        help="keep the smallest rank holding ETA of the squared spectrum",
    )


def _add_pipeline_flags(p, default_delays, default_rank):
    p.add_argument("--delays", type=int, default=default_delays,
                   help=f"embedding rows per channel (default {default_delays})")
    _add_rank_flags(p)
    p.set_defaults(default_rank=default_rank)
    p.add_argument("--epsilon", type=float, default=DEFAULT_EPSILON,
                   help="slow/fast frequency-ratio threshold")
    p.add_argument("--sparse-method", choices=("modal", "residual"),
                   default="modal", help="fast-component construction")
    p.add_argument("--derivative-method", choices=("modal", "finite-difference"),
                   default="modal", help="component differentiation")


def _add_input_flags(p):
    src = p.add_mutually_exclusive_group(required=True)
    src.add_argument("--input", help="CSV file with a header row")
    src.add_argument("--gauge", nargs="+", help="gauge files, in channel order")
    p.add_argument("--channel", type=int, default=0,
                   help="0-based gauge data column (after the time column)")
    p.add_argument("--time-column", default="t", help="CSV time column name")


def _add_solver_flags(p):
    p.add_argument("--H", type=float, default=0.1, help="slow step size")
    p.add_argument("--substeps", type=int, default=10,
                   help="fast substeps per slow step")
    p.add_argument("--scheme", choices=solver_mod.SCHEMES, default="lie-trotter")
    p.add_argument("--interp", choices=("linear", "cubic"), default="cubic",
                   help="tabulated-RHS interpolation")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="scalesep",
        description="Slow/fast time-scale separation and multirate solving",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_toy = sub.add_parser("toy", help="run the built-in test problem end to end")
    p_toy.add_argument("--outdir", default="toy_out", help="output directory")
    p_toy.add_argument("--dt", type=float, default=0.01, help="sample spacing")
    p_toy.add_argument("--t-end", type=float, default=solver_mod.DEFAULT_TOY_SPAN,
                       help="span of the generated data")
    p_toy.add_argument("--y0", type=float, default=1.0, help="initial value")
    _add_pipeline_flags(p_toy, default_delays=300, default_rank=20)
    _add_solver_flags(p_toy)
    p_toy.set_defaults(func=cmd_toy)

    p_sep = sub.add_parser("separate", help="split a dataset into slow/fast parts")
    _add_input_flags(p_sep)
    p_sep.add_argument("--outdir", default="separate_out", help="output directory")
    _add_pipeline_flags(p_sep, default_delays=150, default_rank=75)
    p_sep.set_defaults(func=cmd_separate)

    p_solve = sub.add_parser("solve", help="integrate from component CSVs")
    p_solve.add_argument("--slow-rhs", required=True, help="slow component CSV")
    p_solve.add_argument("--fast-rhs", required=True, help="fast component CSV")
    p_solve.add_argument("--time-column", default="t")
    p_solve.add_argument("--y0", type=float, required=True, help="initial value")
    p_solve.add_argument("--t0", type=float, default=None,
                         help="start time (default: start of common span)")
    p_solve.add_argument("--tend", type=float, default=None,
                         help="end time (default: end of common span)")
    _add_solver_flags(p_solve)
    p_solve.add_argument("--output", default="solution.csv", help="solution CSV path")
    p_solve.set_defaults(func=cmd_solve)

    p_dmd = sub.add_parser("dmd", help="fit or evaluate a stored decomposition")
    dmd_sub = p_dmd.add_subparsers(dest="dmd_command", required=True)

    p_fit = dmd_sub.add_parser("fit", help="fit a model and store it as CSV")
    _add_input_flags(p_fit)
    p_fit.add_argument("--delays", type=int, required=True,
                       help="embedding rows per channel")
    _add_rank_flags(p_fit)
    p_fit.add_argument("--outdir", default="dmd_out", help="model bundle directory")
    p_fit.set_defaults(func=cmd_dmd_fit)

    p_rec = dmd_sub.add_parser("reconstruct",
                               help="evaluate a stored model on its training grid")
    p_rec.add_argument("--model", required=True, help="model bundle directory")
    p_rec.add_argument("--outdir", default="dmd_out", help="output directory")
    p_rec.set_defaults(func=cmd_dmd_reconstruct)

    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except InputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except NumericError as exc:
        print(f"numeric failure: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
