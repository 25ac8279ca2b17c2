"""Error handling and custom exceptions"""
from src.error_trace.exceptions import (
    RisOutageError,
    ContractViolationError,
    DomainError,
    PoleError,
    ConfigurationError,
    UsageError,
    PrecisionError,
    GridError,
    SeriesInstabilityError,
    ConsistencyError,
    TrainingError,
    DataScaleError,
    UndefinedMetricError,
    StorageError
)

__all__ = [
    "RisOutageError",
    "ContractViolationError",
    "DomainError",
    "PoleError",
    "ConfigurationError",
    "UsageError",
    "PrecisionError",
    "GridError",
    "SeriesInstabilityError",
    "ConsistencyError",
    "TrainingError",
    "DataScaleError",
    "UndefinedMetricError",
    "StorageError"
]
