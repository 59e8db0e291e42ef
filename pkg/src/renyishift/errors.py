"""Exception types shared across the package."""


class DomainError(ValueError):
    """An argument lies outside the domain where the quantity is defined."""


class ConvergenceError(ArithmeticError):
    """A numerical procedure failed to reach its tolerance.

    ``levels`` holds the last estimates produced before giving up (for
    quadrature: the values at the last two refinement levels).
    """

    def __init__(self, message, levels=(), partial=None):
        super().__init__(message)
        self.levels = tuple(levels)
        self.partial = partial
