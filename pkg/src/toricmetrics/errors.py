"""Exception types shared across the package."""


class ToricError(Exception):
    """Base class for all toricmetrics errors."""


class PolytopeError(ToricError):
    """Invalid polytope data: malformed file, non-primitive normal,
    unbounded/empty feasible region, redundant facet, or a degenerate
    (non-simple) vertex."""


class BoundaryPointError(ToricError):
    """A point required to be strictly interior lies on or outside the
    polytope boundary."""


class SingularHessianError(ToricError):
    """The Hessian is singular or not positive definite (a Cholesky pivot
    fell below threshold)."""


class ConvergenceError(ToricError):
    """An iterative procedure (Newton inversion, adaptive quadrature)
    failed to reach its tolerance within the configured budget."""
