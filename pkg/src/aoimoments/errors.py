"""Exception types raised across the package."""


class InvalidParameterError(ValueError):
    """A constructor or operation received an out-of-range parameter."""


class DomainError(ValueError):
    """A function was evaluated outside its domain, e.g. a PGF at z > 1."""


class InstabilityError(ArithmeticError):
    """The queue is not stable (traffic intensity >= 1)."""


class NumericalError(RuntimeError):
    """A numerical routine failed to bracket or converge."""


class MomentOverflowError(OverflowError):
    """A raw moment exceeds the representable range used for series bounds."""
