"""Exception hierarchy shared by every module.

Errors fall into three groups that the CLI maps onto exit codes: usage
errors (bad identifiers, bad configuration), data errors (unreadable or
malformed input) and numerical failures (degenerate fits).
"""


class CircleFitError(Exception):
    """Base class for all package errors."""


# -- usage ------------------------------------------------------------------

class UsageError(CircleFitError):
    pass


class UnknownAlgorithm(UsageError):
    pass


class UnknownMethod(UsageError):
    pass


class InvalidConfig(UsageError):
    pass


class BadCount(UsageError):
    pass


# -- data -------------------------------------------------------------------

class DataError(CircleFitError):
    pass


class PointsIOError(DataError, OSError):
    pass


class ParseError(DataError):
    def __init__(self, message, line=None, column=None):
        self.line = line
        self.column = column
        where = ""
        if line is not None:
            where = f" (line {line}" + (f", col {column})" if column is not None else ")")
        super().__init__(message + where)


class NonFiniteValue(DataError):
    pass


class EmptySet(DataError):
    pass


class EmptyInput(DataError):
    pass


class EmptyDataset(DataError):
    pass


class LengthMismatch(DataError):
    pass


class TooFewValues(DataError):
    pass


class NonPositiveInput(DataError):
    pass


# -- numerical --------------------------------------------------------------

class NumericalError(CircleFitError):
    pass


class TooFewPoints(NumericalError):
    pass


class CollinearPoints(NumericalError):
    pass


class SingularSystem(NumericalError):
    pass


class NoAdmissibleEigenvalue(NumericalError):
    pass


class NoModelFound(NumericalError):
    pass


class DegenerateScale(NumericalError):
    pass


class PipelineError(CircleFitError):
    """A pipeline stage failed; ``stage`` is ``"filter"`` or ``"fit"``."""

    def __init__(self, stage, cause):
        self.stage = stage
        self.cause = cause
        super().__init__(f"{stage} stage: {type(cause).__name__}: {cause}")
