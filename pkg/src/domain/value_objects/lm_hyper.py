"""
Levenberg-Marquardt Hyperparameters Value Object
"""
from dataclasses import asdict, dataclass

from src.config.constants import (
    LM_LAMBDA0,
    LM_LAMBDA_DOWN,
    LM_LAMBDA_MAX,
    LM_LAMBDA_UP,
    LM_MAX_EPOCHS,
    LM_MAX_RETRIES,
    LM_PATIENCE,
)
from src.error_trace.exceptions import ContractViolationError


@dataclass(frozen=True)
class LmHyperParams:
    """Damping schedule and stopping rule of full-batch LM training"""

    lambda0: float = LM_LAMBDA0
    lambda_up: float = LM_LAMBDA_UP
    lambda_down: float = LM_LAMBDA_DOWN
    max_epochs: int = LM_MAX_EPOCHS
    patience: int = LM_PATIENCE
    max_retries: int = LM_MAX_RETRIES
    lambda_max: float = LM_LAMBDA_MAX

    def __post_init__(self):
        """Validate schedule"""
        if not 0 < self.lambda0 <= self.lambda_max:
            raise ContractViolationError("lambda0 must lie in (0, lambda_max]")
        if not self.lambda_up > 1:
            raise ContractViolationError("lambda_up must exceed 1")
        if not 0 < self.lambda_down < 1:
            raise ContractViolationError("lambda_down must lie in (0, 1)")
        if self.max_epochs < 1 or self.patience < 1 or self.max_retries < 1:
            raise ContractViolationError(
                "max_epochs, patience and max_retries must be positive",
                details=asdict(self)
            )

    def to_dict(self) -> dict:
        return asdict(self)
