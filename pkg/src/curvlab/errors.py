"""Exception hierarchy."""


class CurvlabError(Exception):
    """Base class for all library errors."""


class DimensionError(CurvlabError, ValueError):
    """Shapes or algebras do not match."""


class InvalidInputError(CurvlabError, ValueError):
    """Non-finite or otherwise malformed numeric input."""


class DomainError(CurvlabError, ValueError):
    """Argument outside the domain where the quantity is defined."""

    def __init__(self, message: str, value=None):
        super().__init__(message)
        self.value = value


class SymmetryError(CurvlabError, ValueError):
    def __init__(self, message: str, residual: float):
        super().__init__(f"{message} (residual {residual:.3e})")
        self.residual = residual


class NotDissipativeError(CurvlabError, ValueError):
    def __init__(self, message: str, min_eig: float):
        super().__init__(f"{message} (min eigenvalue {min_eig:.3e})")
        self.min_eig = min_eig


class NonUnitalError(CurvlabError, ValueError):
    def __init__(self, message: str, residual: float):
        super().__init__(f"{message} (residual {residual:.3e})")
        self.residual = residual


class NotSubalgebraError(CurvlabError, ValueError):
    def __init__(self, message: str, residual: float):
        super().__init__(f"{message} (residual {residual:.3e})")
        self.residual = residual


class BasisError(CurvlabError, ValueError):
    pass


class ConsistencyError(CurvlabError, RuntimeError):
    """An internal check failed that valid inputs should never trigger."""


class DivergenceError(CurvlabError, RuntimeError):
    pass


class CommutationError(CurvlabError, ValueError):
    def __init__(self, message: str, residual: float):
        super().__init__(f"{message} (residual {residual:.3e})")
        self.residual = residual


class CNDError(CurvlabError, ValueError):
    """psi is not conditionally negative definite; ``vector`` witnesses it."""

    def __init__(self, message: str, vector, min_eig: float):
        super().__init__(f"{message} (min eigenvalue {min_eig:.3e})")
        self.vector = vector
        self.min_eig = min_eig


class GroupTableError(CurvlabError, ValueError):
    pass


class MeasureSupportError(CurvlabError, ValueError):
    pass


class ParseError(CurvlabError, ValueError):
    """Malformed input file."""
