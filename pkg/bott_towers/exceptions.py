"""Exception hierarchy shared by every bott_towers module."""
from typing import Optional


class BottTowerError(Exception):
    """Base class for all errors raised by the package."""


class BottMatrixError(BottTowerError, ValueError):
    """A matrix text or value violates the Bott matrix format.

    Attributes:
        row: 1-based row of the offending entry, if known.
        column: 1-based column of the offending entry, if known.
    """

    def __init__(self, message: str, row: Optional[int] = None, column: Optional[int] = None):
        self.row = row
        self.column = column
        location = ''
        if row is not None and column is not None:
            location = f" (row {row}, column {column})"
        elif row is not None:
            location = f" (row {row})"
        super().__init__(f"{message}{location}")


class IndexRangeError(BottMatrixError):
    """A row, pair or suffix index lies outside the admissible range."""


class EnumerationCapError(BottTowerError):
    """An enumeration was requested above the configured size cap."""


class RingMismatchError(BottTowerError, ValueError):
    """Ring elements built for different Bott matrices were combined."""


class ConsistencyError(BottTowerError, RuntimeError):
    """Two independent computations of the same invariant disagree."""
