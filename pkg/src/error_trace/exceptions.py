"""
Custom Exception Classes
"""
from typing import Optional, Dict, Any

from src.config.constants import EXIT_USAGE, EXIT_NUMERICAL, EXIT_IO


class RisOutageError(Exception):
    """Base exception for the outage toolkit"""

    exit_code: int = EXIT_NUMERICAL

    def __init__(
        self,
        message: str,
        error_code: Optional[str] = None,
        details: Optional[Dict[str, Any]] = None
    ):
        self.message = message
        self.error_code = error_code or self._default_code()
        self.details = details or {}
        super().__init__(self.message)

    @classmethod
    def _default_code(cls) -> str:
        name = cls.__name__.replace("Error", "")
        snake = "".join(f"_{c}" if c.isupper() else c for c in name).lstrip("_")
        return f"{snake.upper()}_ERROR"

    def to_dict(self) -> Dict[str, Any]:
        """Convert exception to dictionary"""
        return {
            "error": self.__class__.__name__,
            "message": self.message,
            "error_code": self.error_code,
            "details": self.details,
            "exit_code": self.exit_code,
        }


class ContractViolationError(RisOutageError):
    """Raised when an input breaks an operation's precondition"""
    exit_code = EXIT_USAGE


class DomainError(ContractViolationError):
    """Raised when a special function is evaluated outside its domain"""
    pass


class PoleError(DomainError):
    """Raised when a gamma-type function is evaluated at a pole"""
    pass


class ConfigurationError(ContractViolationError):
    """Raised when configuration is invalid"""
    pass


class UsageError(ContractViolationError):
    """Raised when the command line is malformed"""
    pass


class PrecisionError(RisOutageError):
    """Raised when a numerical routine cannot meet its accuracy target"""
    pass


class GridError(PrecisionError):
    """Raised when a density grid leaves too much probability mass outside its support"""

    def __init__(self, message: str, tail_mass: float, suggested_upper: float):
        super().__init__(
            message=message,
            details={"tail_mass": tail_mass, "suggested_upper": suggested_upper}
        )
        self.tail_mass = tail_mass
        self.suggested_upper = suggested_upper


class SeriesInstabilityError(PrecisionError):
    """Raised when the explicit series cannot resolve its pole cancellation"""
    pass


class ConsistencyError(PrecisionError):
    """Raised when derived moments contradict each other"""
    pass


class TrainingError(RisOutageError):
    """Raised when surrogate training fails"""
    pass


class DataScaleError(TrainingError):
    """Raised when training data produce non-finite Jacobians"""
    pass


class UndefinedMetricError(RisOutageError):
    """Raised when a regression metric is undefined for the given split"""
    pass


class StorageError(RisOutageError):
    """Raised when reading or writing a dataset, model or result file fails"""
    exit_code = EXIT_IO
