"""Exception hierarchy shared by all modules."""


class GenBesselError(Exception):
    """Base class for every error raised by this package."""


class InvalidParams(GenBesselError, ValueError):
    """Parameters violate a precondition (kappa at a pole, B >= A, ...)."""


class NonConvergence(GenBesselError):
    """A series or adaptive procedure exhausted its budget."""


class PoleHit(GenBesselError, ZeroDivisionError):
    """A denominator vanished (to working precision)."""


class DerivativeZero(GenBesselError, ZeroDivisionError):
    """u' vanished where a quotient by u' was required."""


class ContourZero(GenBesselError):
    """A zero lies on (or numerically at) the integration contour."""
