"""Exception hierarchy shared by all dop modules."""


class DopError(Exception):
    """Base class for all library errors."""


class MalformedInputError(DopError):
    """Structurally invalid input (zero operator, zero denominator, ...)."""


class PrecisionError(DopError):
    """A truncated computation ran out of known coefficients."""


class NotInvertibleError(DopError):
    """A matrix or series that must be invertible is singular."""


class UnsupportedSlopeError(DopError):
    """Local Newton slopes outside the supported set {0, 1}."""


class UnsupportedExponentError(DopError):
    """Exponent data lives in a proper algebraic extension of Q."""


class WrongRegularityError(DopError):
    """Operation requires a regular (slope-0) point."""


class UnsupportedTermError(DopError):
    """A log-exp term the operation cannot handle (e.g. delta != 0)."""


class TransportPoleError(DopError):
    """Pochhammer-style shift hit a pole (alpha + i + 1 = 0)."""


class HypothesisError(DopError):
    """Arithmetic hypothesis of a growth law is violated."""


class OperatorSyntaxError(DopError):
    """Operator expression failed to parse."""

    def __init__(self, message, line=1, column=0):
        super().__init__(f"{message} (line {line}, column {column})")
        self.line = line
        self.column = column
