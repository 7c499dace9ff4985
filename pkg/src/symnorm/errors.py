"""Exception hierarchy shared by every module."""

from __future__ import annotations


class SymNormError(Exception):
    """Base class. ``exit_code`` is what the CLI returns for this class."""

    exit_code = 3


class InputError(SymNormError):
    exit_code = 2


class InvalidIndex(InputError):
    pass


class DegreeMismatch(InputError):
    pass


class DimensionMismatch(InputError):
    pass


class InvalidGraph(InputError):
    pass


class DegreeTooSmall(InputError):
    pass


class ZeroTensor(InputError):
    pass


class UsageError(InputError):
    pass


class StateNormalizationError(InputError):
    pass


class NumericOverflow(SymNormError):
    pass


class SolverStall(SymNormError):
    def __init__(self, message: str, partial=None):
        super().__init__(message)
        self.partial = partial


class UnclassifiedExceptional(SymNormError):
    pass


class InternalError(SymNormError):
    pass


class TrackingUnreliable(SymNormError):
    pass
