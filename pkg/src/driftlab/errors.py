"""Exception types shared across the package."""


class DriftError(Exception):
    """Base class for all package-specific errors."""


class ParameterError(DriftError, ValueError):
    """A parameter lies outside its documented domain."""


class UnsupportedError(DriftError, TypeError):
    """The requested operation is not available for this object."""


class CapacityError(DriftError, RuntimeError):
    """A size limit (state count, subdivision cap) was exceeded."""

    def __init__(self, message: str, count: int | None = None):
        super().__init__(message)
        self.count = count


class StructureError(DriftError, ValueError):
    """A structural precondition on a chain or graph fails.

    Carries the offending state or edge when one can be named.
    """

    def __init__(self, message: str, offender=None):
        super().__init__(message)
        self.offender = offender


class MonotonicityError(StructureError):
    """A level map decreases along some transition."""


class OutOfDomainError(DriftError, ValueError):
    """A potential was evaluated outside its documented domain."""


class ConfigError(DriftError, ValueError):
    """An experiment config failed to parse or validate."""
