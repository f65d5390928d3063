"""Exception hierarchy shared by every module in the package."""


class PrimeSumsError(Exception):
    """Base class for all errors raised by primesums."""


class CapacityError(PrimeSumsError):
    """A configured size limit (sieve bound, accumulator width) was exceeded."""


class OutOfProvenRangeError(PrimeSumsError):
    """Value is beyond the range where the deterministic primality test is proven."""


class DomainError(PrimeSumsError, ValueError):
    """Argument outside the mathematical domain of the operation."""


class NoRootError(PrimeSumsError):
    """A root-finding bracket contained no sign change."""


class DigestMismatchError(PrimeSumsError):
    """Checkpoint does not match the data it claims to describe."""


class InsufficientDataError(PrimeSumsError):
    """Supplied hit or count data does not cover the requested range."""
