"""Exception types shared across the package.

The CLI maps each family onto its own exit status, so library code should
raise the most specific one that applies.
"""


class AicmfError(ValueError):
    """Base class for all package errors."""

    exit_code = 2


class ConfigError(AicmfError):
    """Invalid parameters: scale grids, q grids, intervals, ranges."""

    exit_code = 1


class DataError(AicmfError):
    """Input data that cannot be analysed (malformed files, bad prices)."""

    exit_code = 2


class NumericalError(AicmfError):
    """A computation hit a numerical dead end (zero variance, log of zero)."""

    exit_code = 3
