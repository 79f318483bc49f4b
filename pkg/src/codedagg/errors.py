"""Exception hierarchy shared by every module of the package."""

from __future__ import annotations


class CodedAggError(Exception):
    """Base class for all errors raised by codedagg."""


class DivisionByZero(CodedAggError, ZeroDivisionError):
    pass


class DimensionMismatch(CodedAggError, ValueError):
    pass


class DuplicateEvaluationPoint(CodedAggError, ValueError):
    pass


class InvalidEvaluationPoint(CodedAggError, ValueError):
    pass


class InvalidGroup(CodedAggError, ValueError):
    pass


class RoundTwoNotApplicable(CodedAggError, ValueError):
    """Raised when a second-round operation is requested with K = 1."""


class MissingShare(CodedAggError, KeyError):
    def __init__(self, sender: int):
        super().__init__(sender)
        self.sender = sender

    def __str__(self) -> str:
        return f"no verified round-1 share from sender {self.sender}"


class NotEnoughObservations(CodedAggError, ValueError):
    pass


class NotEnoughShares(NotEnoughObservations):
    pass


class DecodingFailed(CodedAggError, ValueError):
    """No polynomial of the requested degree is within the error budget.

    ``pair`` is set when the failure comes from a pairwise-distance decode.
    """

    def __init__(self, message: str, pair: tuple[int, int] | None = None):
        super().__init__(message)
        self.pair = pair


class NegativeLift(CodedAggError, ArithmeticError):
    pass


class ResilienceBoundViolated(CodedAggError, ValueError):
    pass


class UnsafeQuantization(CodedAggError, ValueError):
    pass


class OverflowDetected(CodedAggError, ArithmeticError):
    pass


class InvalidParameters(CodedAggError, ValueError):
    def __init__(self, violations):
        self.violations = list(violations)
        super().__init__("; ".join(str(v) for v in self.violations))


class RoundAborted(CodedAggError, RuntimeError):
    """A protocol round could not complete.

    ``step`` is the protocol step (1-11) at which the failure surfaced and
    ``cause`` the underlying exception.
    """

    def __init__(self, step: int, cause: BaseException | str):
        self.step = step
        self.cause = cause
        super().__init__(f"round aborted at step {step}: {cause}")


class ConfigError(CodedAggError, ValueError):
    """Scenario file could not be parsed; ``line`` is 1-based when known."""

    def __init__(self, message: str, line: int | None = None):
        self.line = line
        self.message = message
        where = f"line {line}: " if line is not None else ""
        super().__init__(where + message)
