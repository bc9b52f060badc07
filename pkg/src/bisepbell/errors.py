"""Exception types raised across the package."""


class BisepError(Exception):
    """Base class for all package errors."""


class NotHermitian(BisepError, ValueError):
    pass


class NoConvergence(BisepError, RuntimeError):
    pass


class DimensionMismatch(BisepError, ValueError):
    pass


class BadLabel(BisepError, ValueError):
    pass


class BadDimension(BisepError, ValueError):
    pass


class NormViolation(BisepError, ValueError):
    pass


class BadPosition(BisepError, ValueError):
    pass


class BadParty(BisepError, ValueError):
    pass


class InfeasibleFloor(BisepError, RuntimeError):
    """No optimized point reached the requested lower bound on the constrained term."""
