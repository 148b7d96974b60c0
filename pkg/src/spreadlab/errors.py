"""Exception hierarchy shared by every spreadlab module."""

from __future__ import annotations


class SpreadLabError(Exception):
    """Base class for all spreadlab errors."""


class DimensionError(SpreadLabError, ValueError):
    """Dimension out of range or mismatched operands."""


class MatrixFormatError(SpreadLabError, ValueError):
    """Malformed matrix text or invalid entries."""


class NumericError(SpreadLabError, ArithmeticError):
    """Base class for failures of a numeric routine."""


class NumericOverflowError(NumericError):
    def __init__(self, message: str = "numeric overflow"):
        super().__init__(message)


class NilpotentMatrixError(NumericError):
    def __init__(self, message: str = "nilpotent matrix cannot be normalized"):
        super().__init__(message)


class ConvergenceError(NumericError):
    """An iterative solver ran out of iterations.

    ``partial`` holds whatever the solver had already established
    (for the eigensolver, the eigenvalues deflated so far).
    """

    def __init__(self, message: str, partial=None):
        super().__init__(message)
        self.partial = partial


class ConstructionError(SpreadLabError, RuntimeError):
    """An exact identity that must hold by construction failed."""
