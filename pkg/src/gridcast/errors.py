"""Exception hierarchy shared by the library and the CLI.

Each class carries the process exit code the CLI maps it to.
"""


class GridcastError(Exception):
    exit_code = 1


class ConfigError(GridcastError):
    """Bad configuration key, value, or profile."""

    exit_code = 2


class DataError(GridcastError):
    """Missing, malformed, or inconsistent input data."""

    exit_code = 3


class NumericError(GridcastError):
    """Numeric failure (NaN/Inf in a buffer, diverging optimization)."""

    exit_code = 4
