"""
Error hierarchy for the wavelet certification toolkit.

Every error carries a machine-readable ``code`` (the class name, e.g.
``RNotOdd``) and the process ``exit_code`` the CLI maps it to.
"""

from typing import Any, Dict


class NumraError(Exception):
    """Base class for all toolkit errors."""

    exit_code = 1

    def __init__(self, message: str, **context: Any):
        super().__init__(message)
        self.message = message
        self.context = context

    @property
    def code(self) -> str:
        return type(self).__name__

    def to_dict(self) -> Dict[str, Any]:
        body: Dict[str, Any] = {"error": self.code, "message": self.message}
        body.update({key: value for key, value in self.context.items() if value is not None})
        return body


class InvalidSpectrum(NumraError):
    """The (N, r) pair does not define a valid translation set."""

    exit_code = 2


class NNonPositive(InvalidSpectrum):
    pass


class RNotOdd(InvalidSpectrum):
    pass


class ROutOfRange(InvalidSpectrum):
    pass


class NotCoprime(InvalidSpectrum):
    pass


class NotATile(InvalidSpectrum):
    """Gamma does not tile the line under Lambda translations."""


class InvalidParameter(NumraError):
    exit_code = 2


class InvalidWindow(InvalidParameter):
    pass


class InvalidInterval(InvalidParameter):
    pass


class InvalidGrid(InvalidParameter):
    pass


class NotNormalized(InvalidParameter):
    pass


class WrongChannelCount(InvalidParameter):
    pass


class LowerBoundZero(InvalidParameter):
    pass


class DegenerateTail(InvalidParameter):
    pass


class ZeroSignal(InvalidParameter):
    pass


class AlignmentError(NumraError):
    """Grids do not line up the way an exact index shift requires."""

    exit_code = 4


class GridMismatch(AlignmentError):
    pass


class StepNotAligned(AlignmentError):
    pass


class UnalignedQuery(AlignmentError):
    pass


class BankFileError(NumraError):
    """A bank, report or sample file could not be read or written."""

    exit_code = 3
