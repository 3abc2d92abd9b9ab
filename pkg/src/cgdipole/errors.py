"""Exception types shared across the package."""


class DomainError(ValueError):
    """Argument outside the validated domain of an operation."""


class ConfigurationError(ValueError):
    """Inconsistent run configuration (mismatched basis/continuum, bad grids)."""


class NumericalError(RuntimeError):
    """A numerical procedure failed to converge.

    Carries the best partial result and an error bound when available.
    """

    def __init__(self, message, partial=None, bound=None):
        super().__init__(message)
        self.partial = partial
        self.bound = bound
