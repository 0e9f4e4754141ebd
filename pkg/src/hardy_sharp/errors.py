"""Exception types shared across the package."""


class HardySharpError(Exception):
    """Base class for all package errors."""


class HypothesisViolation(HardySharpError, ValueError):
    """A parameter set falls outside the hypotheses of the requested theorem."""

    def __init__(self, relation, residual=float("nan"), axis=None):
        self.relation = relation
        self.residual = residual
        self.axis = axis
        where = "" if axis is None else f"axis {axis}: "
        super().__init__(f"{where}{relation} (residual {residual:.3g})")


class DomainError(HardySharpError, ValueError):
    """An argument lies outside the domain of a special function or constant."""


class NonConvergence(HardySharpError, ArithmeticError):
    """Quadrature failed to reach the requested tolerance."""

    def __init__(self, message, level=None, err_est=float("nan")):
        self.level = level
        self.err_est = err_est
        super().__init__(message)


class GridMismatch(HardySharpError, ValueError):
    """Node arrays and value arrays of a grid function are inconsistent."""


class ZeroNorm(HardySharpError, ZeroDivisionError):
    """The source norm of a test function vanished, so no ratio exists."""
