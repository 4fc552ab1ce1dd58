"""Exception types raised by the solver library."""


class DomainError(ValueError):
    """An argument lies outside the domain of a function."""


class ParameterError(ValueError):
    """Invalid problem, grid or mesh parameters."""


class AssemblyError(ArithmeticError):
    """Non-finite kernel or right-hand side value during matrix assembly."""

    def __init__(self, message, index=None):
        super().__init__(message)
        self.index = index


class SingularMatrixError(ArithmeticError):
    """LU factorization hit an exactly zero pivot."""

    def __init__(self, pivot):
        super().__init__(f"matrix is singular: zero pivot at index {pivot}")
        self.pivot = pivot
