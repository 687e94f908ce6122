"""Exception hierarchy for the enumeration engine."""


class EnumerationError(Exception):
    """Base class for every error raised by the engine."""


class PreconditionError(EnumerationError, ValueError):
    """An argument violates the documented precondition of an operation."""


class CapMismatchError(EnumerationError):
    """Two series with different truncation caps were combined."""


class NonUnitError(EnumerationError):
    """A series without constant term +1 or -1 was inverted."""


class ClosureLimitError(EnumerationError):
    """A commutation class grew beyond the configured word limit."""

    def __init__(self, limit: int):
        super().__init__(f"commutation class exceeds {limit} words")
        self.limit = limit


class HistogramTooShortError(EnumerationError):
    """Not enough coefficients to observe the periodic tail."""


class PeriodicityViolation(EnumerationError):
    """A coefficient tail failed the eventual periodicity law."""


class GoldenChecksumError(EnumerationError):
    """The stored golden tables do not match their recorded checksum."""
