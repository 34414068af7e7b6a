"""Error taxonomy shared across the pipeline.

Exit-code mapping used by the CLI: ConfigError -> 2, DataError -> 3,
NumericError -> 4.
"""


class OccauditError(Exception):
    """Base class for all pipeline errors."""

    exit_code = 1


class ConfigError(OccauditError):
    """Invalid configuration: bad ratios, unknown representation, missing paths."""

    exit_code = 2


class DataError(OccauditError):
    """Malformed or insufficient input data."""

    exit_code = 3


class NumericError(OccauditError):
    """Numerical failure: divergence, degenerate variance, zero denominators."""

    exit_code = 4
