"""Exception types raised by qrstoch."""


class QRSError(Exception):
    """Base class for all library errors."""


class InvalidModulusError(QRSError, ValueError):
    pass


class UndefinedGapsError(QRSError, ValueError):
    """Raised when a set has fewer than two elements, so gaps are undefined."""


class RangeError(QRSError, ValueError):
    pass


class InvalidConfigError(QRSError, ValueError):
    """Overlapping or repeated shift sets."""


class DomainError(QRSError, ValueError):
    pass


class HypothesisViolation(QRSError, ValueError):
    """Inputs fall outside the hypotheses a theorem-level check requires."""


class ResourceLimitError(QRSError, RuntimeError):
    """A sieve, enumeration or factorization would exceed its budget."""
