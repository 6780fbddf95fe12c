from typing import Optional


class PreconditionError(ValueError):
    """An operation was called outside its documented preconditions."""


class DimensionMismatchError(PreconditionError):
    """Operator and state (or two operands) do not share a dimension."""


class SingularityError(PreconditionError):
    """A gamma- or delta-type factor was evaluated at or beyond its pole."""


class FrameComparisonError(TypeError):
    """Two local times from different frames were compared directly."""


class ConfigError(ValueError):
    """A scenario config could not be read or failed schema validation."""

    def __init__(self, message: str, location: Optional[str] = None):
        super().__init__(message)
        self.location = location

    def __str__(self) -> str:
        base = super().__str__()
        return f"{self.location}: {base}" if self.location else base
