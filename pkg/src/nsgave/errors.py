"""Exception hierarchy shared by every module of the package."""


class GaveError(Exception):
    """Base class for all errors raised by nsgave."""


class DimensionMismatch(GaveError, ValueError):
    pass


class SingularMatrix(GaveError, ArithmeticError):
    """A pivot fell below the relative singularity threshold.

    ``pivot`` is the zero-based elimination step at which it happened.
    """

    def __init__(self, pivot: int, magnitude: float = 0.0):
        self.pivot = pivot
        self.magnitude = magnitude
        super().__init__(f"matrix is numerically singular at pivot {pivot} (|u|={magnitude:.3e})")


class SingularJacobian(SingularMatrix):
    """The reduced Newton matrix A + B*diag(v2) could not be factorized."""


class ConvergenceFailure(GaveError, ArithmeticError):
    pass


class DegeneratePoint(GaveError, ValueError):
    """Derivative requested at (mu, x) = (0, 0), where phi is not differentiable."""


class NonpositiveMu(GaveError, ValueError):
    pass


class InvalidConfig(GaveError, ValueError):
    pass


class LineSearchStalled(GaveError, ArithmeticError):
    def __init__(self, backtracks: int):
        self.backtracks = backtracks
        super().__init__(f"no acceptable step after {backtracks} backtracks")


class DimensionTooLarge(GaveError, ValueError):
    pass


class OddDimension(GaveError, ValueError):
    pass


class GenerationFailure(GaveError, RuntimeError):
    pass


class ProblemFormatError(GaveError, ValueError):
    """Malformed problem file; ``line`` is 1-based (0 when unknown)."""

    def __init__(self, message: str, line: int = 0):
        self.line = line
        where = f"line {line}: " if line else ""
        super().__init__(where + message)
