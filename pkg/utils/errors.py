class TropicalKexError(Exception):
    """Base class for every error raised by this package."""


class DimensionError(TropicalKexError, ValueError):
    """Raised when matrices of different orders are combined."""


class DomainError(TropicalKexError, ValueError):
    """Raised when an argument is outside the domain of an operation."""


class InstanceFormatError(TropicalKexError, ValueError):
    """Raised when a matrix, instance or transcript file cannot be decoded."""


class PeriodNotFoundError(TropicalKexError):
    """Raised when no period is detected within the step budget."""


class AttackFailedError(TropicalKexError):
    """Raised when the attack cannot produce a verified exponent."""
