"""Exception types shared across the package."""


class JellyfishError(Exception):
    """Base class for all package errors."""


class GraphViolation(JellyfishError, ValueError):
    """A structural defect in a jellyfish graph."""


class SimplicityViolation(GraphViolation):
    pass


class SymmetryViolation(GraphViolation):
    pass


class ConnectivityViolation(GraphViolation):
    pass


class InvalidVertex(GraphViolation):
    pass


class NonPositiveDegree(JellyfishError, ValueError):
    pass


class DimensionMismatch(JellyfishError, ValueError):
    pass


class EmptyTrajectory(JellyfishError, ValueError):
    pass


class SingularMatrix(JellyfishError, ArithmeticError):
    pass


class SingularSystem(JellyfishError, ArithmeticError):
    pass


class SingularBeyondRepair(JellyfishError, ArithmeticError):
    """Least-squares fallback left a residual too large to be a true fixed point."""


class NonZeroCurrentSum(JellyfishError, ValueError):
    pass


class KirchhoffMismatch(JellyfishError, ArithmeticError):
    """The tail form and the core form of the outflow current disagree."""


class UndefinedForZeroAve(UserWarning):
    """Accumulation ranking is degenerate because the mean input amplitude is zero."""
