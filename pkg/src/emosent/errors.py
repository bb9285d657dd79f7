"""Exception types shared across the package.

The CLI maps these onto exit codes: DataError -> 3, NumericError -> 4.
"""


class EmosentError(Exception):
    """Base class for package errors."""


class DataError(EmosentError):
    """Invalid, missing, or inconsistent input data."""


class NumericError(EmosentError):
    """Numeric failure: degenerate variance, non-finite values, and friends."""
