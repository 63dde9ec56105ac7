"""Slow/fast time-scale separation for uniformly sampled trajectories.

The pipeline lifts a partial-state trajectory into a Hankel delay
embedding, fits a dynamic mode decomposition of the embedded snapshots,
splits the modes into slow and fast sets by relative frequency, and
rebuilds each component together with its exact time derivative.  The
derivatives can be tabulated to disk and fed to a multirate
operator-splitting integrator that advances the slow field with a large
step and the fast field with substeps.
"""

from .dmd import (
    DmdModel,
    SINGULAR_FLOOR,
    fit,
    fit_embedding,
    load_model,
    reconstruct,
    save_model,
    split_snapshots,
    valid_rank_limit,
)
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
from .errors import (
    ColumnOutOfRange,
    EigenFailure,
    EmptyGauge,
    GridMismatch,
    InputError,
    InvalidPolicyParameter,
    InvalidSpan,
    InvalidStep,
    IoFailure,
    MalformedNumber,
    MissingColumn,
    NonUniformGrid,
    NumericError,
    OutOfRange,
    RankTooLarge,
    ScaleSepError,
    ShapeMismatch,
    SingularTruncation,
    TooFewColumns,
    TooFewSamples,
)
from .ingest import load_csv, load_gauges, write_csv
from .rhs import TabulatedRhs, eval_rhs, hermite_slopes
from .separation import (
    DEFAULT_EPSILON,
    ScaleSplit,
    classify_modes,
    component_derivative,
    finite_difference_derivative,
    lowrank_component,
    sparse_component,
    split_scales,
)
from .series import TimeSeries
from .solver import (
    COMPILED_KERNELS,
    DEFAULT_TOY_SPAN,
    SolveResult,
    backend_name,
    generate_toy,
    solve_multirate,
    solve_reference,
    toy_closed_form,
    toy_rhs,
)

__version__ = "0.1.0"

__all__ = [
    "COMPILED_KERNELS",
    "ColumnOutOfRange",
    "DEFAULT_EPSILON",
    "DEFAULT_RANK_POLICY",
    "DEFAULT_TOY_SPAN",
    "DmdModel",
    "EigenFailure",
    "EmptyGauge",
    "EnergyCutoff",
    "FixedRank",
    "GridMismatch",
    "HankelEmbedding",
    "InputError",
    "InvalidPolicyParameter",
    "InvalidSpan",
    "InvalidStep",
    "IoFailure",
    "MalformedNumber",
    "MissingColumn",
    "NonUniformGrid",
    "NumericError",
    "OutOfRange",
    "RankTooLarge",
    "RelativeCutoff",
    "SINGULAR_FLOOR",
    "ScaleSepError",
    "ScaleSplit",
    "ShapeMismatch",
    "SingularTruncation",
    "SolveResult",
    "TabulatedRhs",
    "TimeSeries",
    "TooFewColumns",
    "TooFewSamples",
    "backend_name",
    "build_hankel",
    "choose_rank",
    "classify_modes",
    "component_derivative",
    "deembed",
    "eval_rhs",
    "finite_difference_derivative",
    "fit",
    "fit_embedding",
    "generate_toy",
    "hermite_slopes",
    "load_csv",
    "load_gauges",
    "load_model",
    "lowrank_component",
    "reconstruct",
    "save_model",
    "solve_multirate",
    "solve_reference",
    "sparse_component",
    "split_scales",
    "split_snapshots",
    "toy_closed_form",
    "toy_rhs",
    "valid_rank_limit",
    "write_csv",
]
