"""Exception and warning types shared across the package."""


class DomainError(ValueError):
    """An input lies outside the region where a model is defined."""


class ConfigError(ValueError):
    """A scenario file failed validation.

    Carries the dotted field path and, when known, the 1-based line number.
    """

    def __init__(self, message: str, field: str | None = None, line: int | None = None):
        self.field = field
        self.line = line
        where = []
        if line is not None:
            where.append(f"line {line}")
        if field:
            where.append(f"field '{field}'")
        prefix = f"{', '.join(where)}: " if where else ""
        super().__init__(prefix + message)


class QuadratureError(RuntimeError):
    """Adaptive quadrature failed to reach the requested tolerance."""


class ApproximationWarning(UserWarning):
    """A small-parameter expansion is being used outside its comfort zone."""


class GridResolutionWarning(UserWarning):
    """A sampled phase advances by more than pi between grid points."""
