"""Exception types shared across the package."""


class DomainError(ValueError):
    """An argument lies outside the domain of a law."""


class ConvergenceError(ArithmeticError):
    """A series did not reach its tolerance within the term cap."""


class DivergentPathError(RuntimeError):
    """A simulated path exceeded its step cap without being stopped."""

    def __init__(self, message: str, path_index: int | None = None):
        super().__init__(message)
        self.path_index = path_index


class InsufficientSampleError(RuntimeError):
    """A statistical check cannot be run reliably on the sample at hand."""
