"""Exception hierarchy shared across the package.

The CLI maps these onto exit codes: configuration problems exit 2,
data/parse problems exit 3, numerical failures exit 4.
"""


class KarnetError(Exception):
    """Base class for all package errors."""


class ConfigError(KarnetError):
    """Invalid run configuration (bad flag combination, k > m, ...)."""


class DimensionError(KarnetError):
    """Matrix shapes do not conform for the requested operation."""


class DataError(KarnetError):
    """Dataset parsing or content problem, with an optional location."""

    def __init__(self, message, row=None, column=None):
        loc = []
        if row is not None:
            loc.append(f"row {row}")
        if column is not None:
            loc.append(f"column {column}")
        if loc:
            message = f"{message} ({', '.join(loc)})"
        super().__init__(message)
        self.row = row
        self.column = column


class NumericalError(KarnetError):
    """Numerical failure (SVD breakdown, non-finite values, divergence)."""


class RankDeficiencyError(NumericalError):
    """A pseudoinverse solve found no usable singular values."""
