"""Exception types raised by the toolkit."""


class PolbjjError(Exception):
    """Base class for all toolkit errors."""


class InvalidParameterError(PolbjjError, ValueError):
    """A model or configuration parameter is non-finite or out of range."""


class DomainError(PolbjjError, ValueError):
    """A state lies on or beyond the |varsigma| = 1 boundary."""


class SingularParameterError(PolbjjError, ValueError):
    """A closed-form expression is singular at the requested parameters."""


class NotOscillatoryError(PolbjjError):
    """A trajectory has too few zero crossings to define a frequency."""


class ClassificationError(PolbjjError):
    """A trajectory cannot be classified (e.g. energy drift exceeded)."""


class UnsupportedError(PolbjjError):
    """The requested analysis is not defined for this input."""
