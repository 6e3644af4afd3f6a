# src/errors.py
from fractions import Fraction
from typing import Optional


class NahmLabError(Exception):
    """Base class for all engine errors"""


class SeriesError(NahmLabError, ValueError):
    """Invalid operation on a truncated series"""


class RingMismatchError(SeriesError):
    pass


class TruncationUnderflowError(SeriesError):
    pass


class ZeroSeriesError(SeriesError):
    """Series is identically zero up to its truncation"""


class NonUnitError(SeriesError):
    pass


class FractionalExponentError(SeriesError):
    pass


class WindowError(SeriesError):
    pass


class DepthError(SeriesError):
    """Requested depth exceeds what a series is known to"""


class InsufficientDepthError(DepthError):
    """Raised when a computed value came back shallower than requested"""

    def __init__(self, requested: Fraction, obtained: Fraction):
        self.requested = Fraction(requested)
        self.obtained = obtained
        super().__init__(f"needed depth {requested}, obtained {obtained}")

    @property
    def deficit(self) -> Fraction:
        return self.requested - Fraction(self.obtained)


class ExpressionSyntaxError(NahmLabError, ValueError):
    def __init__(self, message: str, line: int, column: int, text: Optional[str] = None):
        self.line = line
        self.column = column
        self.text = text
        super().__init__(f"syntax error at line {line}, column {column}: {message}")


class ParameterError(NahmLabError, ValueError):
    pass


class NotPositiveDefiniteError(NahmLabError, ValueError):
    pass


class EvaluationError(NahmLabError, ValueError):
    pass


class IllConditionedError(NahmLabError, ValueError):
    pass


class ConvergenceError(NahmLabError, RuntimeError):
    def __init__(self, message: str, residual=None):
        self.residual = residual
        super().__init__(message)


class UnknownSuiteError(NahmLabError, LookupError):
    pass
