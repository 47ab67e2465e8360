"""Exception hierarchy shared across the package."""


class FrameForgeError(Exception):
    """Base class for all errors raised by frame_forge."""


class DomainError(FrameForgeError, ValueError):
    """An argument lies outside the domain of an operation."""


class ZeroColumnError(DomainError):
    def __init__(self, index, norm):
        super().__init__(f"column {index} has norm {norm:.3e}; cannot normalize")
        self.index = index
        self.norm = norm


class ConvergenceError(FrameForgeError, ArithmeticError):
    """An iterative method did not converge; ``last_iterate`` holds its final state."""

    def __init__(self, message, last_iterate=None, last_value=None):
        super().__init__(message)
        self.last_iterate = last_iterate
        self.last_value = last_value


class SearchFailure(FrameForgeError):
    """A randomized search exhausted its trial budget."""


class FieldContextError(FrameForgeError):
    """Field arithmetic produced a value that cannot occur in a valid field."""


class IllConditionedSelection(FrameForgeError, ArithmeticError):
    """Least squares on the selected columns is numerically rank deficient."""

    def __init__(self, message, support=()):
        super().__init__(message)
        self.support = tuple(support)
