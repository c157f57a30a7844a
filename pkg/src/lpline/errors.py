"""Exception types shared across the package."""


class LineFitError(Exception):
    """Base class for all lpline errors."""


class EmptySet(LineFitError):
    """Raised when a point set is empty."""


class InsufficientPoints(LineFitError):
    """Raised when a solver needs more (effective) points than were given."""


class VerticalLineForAlgebraic(LineFitError):
    """Raised when a vertical line x=const is used with the vertical distance."""


class TooLarge(LineFitError):
    """Raised when an exhaustive oracle is asked to handle too many points."""


class ParseError(LineFitError):
    """Malformed point-set input; carries the 1-based line and field position."""

    def __init__(self, message, line=None, field=None):
        super().__init__(message)
        self.line = line
        self.field = field


class EmptyInput(ParseError):
    """Input stream contained no points."""

    def __init__(self, message="no points in input"):
        super().__init__(message)


class NoConvergence(LineFitError):
    """Iterative solver failed to reach its tolerance.

    Carries the best iterate found so the caller can still inspect it.
    """

    def __init__(self, message, best_params=None, best_value=None, grad_norm=None):
        super().__init__(message)
        self.best_params = best_params
        self.best_value = best_value
        self.grad_norm = grad_norm
