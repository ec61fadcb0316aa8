"""Exception types shared across the package."""


class ValidationError(ValueError):
    """A config, state, or parameter violates one of its invariants."""


class QuadratureSingularityError(ArithmeticError):
    """A Brillouin-zone quadrature point landed on the probe energy shell."""
