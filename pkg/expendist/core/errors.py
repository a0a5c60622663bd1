"""Exception hierarchy for expendist.

Every error carries an ``error_code`` that the command-line front end turns into the
process exit status: 1 for bad input, 2 for numerical failures, 3 for I/O failures.
"""

from __future__ import annotations

EXIT_INPUT = 1
EXIT_NUMERIC = 2
EXIT_IO = 3


class ExpendistError(Exception):
    """Base class for all errors raised by expendist."""

    error_code: int = EXIT_INPUT

    def __init__(self, message: str | None = None, error_code: int | None = None):
        self.message = message or "An error occurred in expendist"
        if error_code is not None:
            self.error_code = error_code
        super().__init__(self.message)

    def __str__(self) -> str:
        return f"[Error {self.error_code}] {type(self).__name__}: {self.message}"


class InputError(ExpendistError, ValueError):
    """Malformed or inconsistent user input."""

    error_code = EXIT_INPUT


class NumericError(ExpendistError, ArithmeticError):
    """A computation could not produce a meaningful result."""

    error_code = EXIT_NUMERIC


class OutputError(ExpendistError, OSError):
    """Reading or writing an artifact failed."""

    error_code = EXIT_IO


# grouped data
class MalformedRow(InputError):
    pass


class NonContiguousClasses(InputError):
    pass


class FrequencySumMismatch(InputError):
    pass


class MeanOutsideClass(InputError):
    pass


class TooFewClasses(InputError):
    pass


class MissingDeflator(InputError):
    pass


class MissingClassMeans(InputError):
    pass


# distributions and fitting
class InvalidParams(InputError):
    pass


class LengthMismatch(InputError):
    pass


class MixedFamilies(InputError):
    pass


class GridMismatch(InputError):
    pass


class InvalidConfig(InputError):
    pass


class InvalidBandwidth(InputError):
    pass


class DegeneratePrediction(NumericError):
    pass


class OptimizerFailure(NumericError):
    pass


class SingularRegression(NumericError):
    pass


class DegenerateSample(NumericError):
    pass


class UndefinedMean(NumericError):
    pass


class DegenerateDesign(NumericError):
    pass


class InsufficientTail(NumericError):
    pass


__all__ = [
    "EXIT_INPUT",
    "EXIT_IO",
    "EXIT_NUMERIC",
    "DegenerateDesign",
    "DegeneratePrediction",
    "DegenerateSample",
    "ExpendistError",
    "FrequencySumMismatch",
    "GridMismatch",
    "InputError",
    "InsufficientTail",
    "InvalidBandwidth",
    "InvalidConfig",
    "InvalidParams",
    "LengthMismatch",
    "MalformedRow",
    "MeanOutsideClass",
    "MissingClassMeans",
    "MissingDeflator",
    "MixedFamilies",
    "NonContiguousClasses",
    "NumericError",
    "OptimizerFailure",
    "OutputError",
    "SingularRegression",
    "TooFewClasses",
    "UndefinedMean",
]
