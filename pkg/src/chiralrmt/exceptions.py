"""Exception types shared across the package."""


class DomainError(ValueError):
    """A parameter or argument lies outside the mathematical domain of an operation."""


class QuadratureError(RuntimeError):
    """Adaptive quadrature failed to reach the requested tolerance."""
