"""Exception hierarchy shared by the solver modules."""


class AnomDiffError(Exception):
    """Base class for all solver errors."""


class DomainError(AnomDiffError, ValueError):
    """Order of the derivative (or another real parameter) is out of range."""


class SkewError(AnomDiffError, ValueError):
    """Skewness violates |theta| <= min(alpha, 2 - alpha)."""


class ShapeError(AnomDiffError, ValueError):
    pass


class CutoffError(AnomDiffError, ValueError):
    pass


class SingularMatrixError(AnomDiffError, ArithmeticError):
    pass


class ConvergenceError(AnomDiffError, ArithmeticError):
    pass


class ConfigError(AnomDiffError, ValueError):
    """Invalid scenario configuration.

    ``line`` and ``key`` are filled in when the error comes from parsing a
    scenario file.
    """

    def __init__(self, message, *, line=None, key=None):
        self.line = line
        self.key = key
        prefix = []
        if line is not None:
            prefix.append(f"line {line}")
        if key is not None:
            prefix.append(f"key {key!r}")
        if prefix:
            message = f"{', '.join(prefix)}: {message}"
        super().__init__(message)


class StabilityWarning(UserWarning):
    """Explicit step at or above the positivity bound on dt."""
