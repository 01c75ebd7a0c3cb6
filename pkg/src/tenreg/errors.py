"""Exception types shared across the package."""


class ShapeError(ValueError):
    """Array arguments have incompatible or unsupported shapes."""


class ArgumentError(ValueError):
    """A scalar argument is out of its valid range."""


class NumericError(ArithmeticError):
    """A computation left the numerically meaningful regime."""


class DivergenceError(NumericError):
    """An iterative solver diverged (step size too large).

    Carries the partial trace recorded up to the failing iteration in
    the ``trace`` attribute when available.
    """

    def __init__(self, message, trace=None):
        super().__init__(message)
        self.trace = trace
