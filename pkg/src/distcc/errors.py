"""Exception hierarchy shared by every module of the package."""


class DistccError(Exception):
    """Base class for all errors raised by distcc."""


class ShapeMismatch(DistccError, ValueError):
    pass


class SizeMismatch(ShapeMismatch):
    pass


class DimensionMismatch(ShapeMismatch):
    pass


class NegativeCoefficient(DistccError, ValueError):
    pass


class NotNormalized(DistccError, ValueError):
    pass


class Overflow(DistccError, OverflowError):
    """A construction would exceed a documented size cap."""


class TooLarge(Overflow):
    pass


class SizeExceeded(Overflow):
    pass


class IsolatedVertex(DistccError, ValueError):
    pass


class OddDimension(DistccError, ValueError):
    pass


class EvenN(DistccError, ValueError):
    pass


class UnsupportedFamily(DistccError, ValueError):
    pass


class InvalidState(DistccError, ValueError):
    pass


class InvalidMeasurement(DistccError, ValueError):
    pass


class Infeasible(DistccError):
    """The optimization problem was certified infeasible by the solver."""


class SolverFailure(DistccError, RuntimeError):
    """The solver stopped without a usable certificate."""
