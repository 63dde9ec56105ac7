"""Exception hierarchy.

Two branches matter for the CLI exit-code contract: ``InputError``
(bad files, bad parameters, shape problems -> exit 2) and
``NumericError`` (a computation could not be carried out soundly ->
exit 3).
"""


class ScaleSepError(Exception):
    """Base class for all package errors."""


class InputError(ScaleSepError):
    """Invalid input data or parameters."""


class NumericError(ScaleSepError):
    """A numerical operation failed or would be meaningless."""


# --- ingest ---------------------------------------------------------------

class MissingColumn(InputError):
    """A named CSV column is absent from the header."""


class NonUniformGrid(InputError):
    """Time column spacing deviates from uniform beyond tolerance."""


class MalformedNumber(InputError):
    """A CSV/gauge field could not be parsed as a float."""


class GridMismatch(InputError):
    """Gauge files do not share an identical time grid."""


class ColumnOutOfRange(InputError):
    """Requested data column does not exist in a gauge file."""


class EmptyGauge(InputError):
    """A gauge file holds fewer than two data samples."""


class IoFailure(InputError):
    """File could not be read or written."""


# --- embedding ------------------------------------------------------------

class TooFewSamples(InputError):
    """Series too short for the requested operation."""


class InvalidPolicyParameter(InputError):
    """Rank-policy parameter outside its documented range."""


class ShapeMismatch(InputError):
    """Matrix dimensions inconsistent with the requested operation."""


# --- dmd ------------------------------------------------------------------

class TooFewColumns(InputError):
    """Snapshot matrix has fewer than two columns."""


class RankTooLarge(InputError):
    """Requested truncation rank exceeds the available spectrum."""


class SingularTruncation(NumericError):
    """Truncation rank reaches below the numerical noise floor."""


class EigenFailure(NumericError):
    """Eigendecomposition failed or produced unusable eigenvalues."""


# --- solver ---------------------------------------------------------------

class OutOfRange(InputError):
    """Evaluation time outside the tabulated span."""


class InvalidStep(InputError):
    """Nonpositive or otherwise unusable step parameters."""


class InvalidSpan(InputError):
    """Degenerate or reversed integration span."""
