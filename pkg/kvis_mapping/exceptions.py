"""Custom exceptions for the k-visibility mapping toolkit."""


# Base exception
class KVisMappingError(Exception):
    """Base exception for all k-visibility mapping errors."""

    pass


# Grid errors
class GridError(KVisMappingError):
    """Base class for grid-related errors."""

    pass


class GridBoundsError(GridError):
    """Raised when a point or cell lies outside the grid extent."""

    def __init__(self, axis: str, value: float, limit: float):
        self.axis = axis
        self.value = value
        self.limit = limit
        super().__init__(f"{axis} coordinate {value} outside grid extent [0, {limit})")


class FloorplanError(GridError):
    """Raised when a floorplan violates its invariants."""

    pass


# Operation preconditions
class DomainError(KVisMappingError):
    """Raised when an operation is called outside its domain."""

    pass


class InconsistentFieldError(KVisMappingError):
    """Raised when a k-field has no router cell at k = 0."""

    pass


# Signal processing errors
class DegenerateInputError(KVisMappingError):
    """Raised when clustering receives fewer distinct samples than clusters."""

    pass


class ThresholdError(KVisMappingError):
    """Raised when RSSI bounds are not strictly decreasing."""

    pass


# Configuration errors
class ConfigError(KVisMappingError):
    """Raised when experiment, mapper or filter configuration is invalid."""

    pass


# Metrics errors
class MetricsError(KVisMappingError):
    """Base class for evaluation errors."""

    pass


class UndefinedScoreError(MetricsError):
    """Raised when a score has an empty denominator."""

    pass


# I/O errors
class LoadError(KVisMappingError):
    """Raised when an input file cannot be read or parsed."""

    def __init__(self, path: object, reason: str):
        self.path = str(path)
        self.reason = reason
        super().__init__(f"{self.path}: {reason}")


# Pipeline errors
class PipelineStageError(KVisMappingError):
    """Raised when a pipeline stage fails; carries the stage name."""

    def __init__(self, stage: str, cause: BaseException):
        self.stage = stage
        self.cause = cause
        super().__init__(f"{stage} stage failed: {cause}")
