"""
Monte Carlo Configuration Value Object
"""
from dataclasses import dataclass
from typing import Optional

from src.error_trace.exceptions import ContractViolationError


@dataclass(frozen=True)
class McConfig:
    """Sample budget and seed of one Monte Carlo estimate"""

    n_samples: int = 10_000
    seed: int = 0
    confidence: float = 0.99
    target_op: Optional[float] = None

    def __post_init__(self):
        """Validate configuration"""
        if self.n_samples < 100:
            raise ContractViolationError(
                "n_samples must be at least 100",
                details={"n_samples": self.n_samples}
            )
        if not 0 < self.confidence < 1:
            raise ContractViolationError("confidence must lie in (0, 1)")
        if self.seed < 0 or self.seed >= 2 ** 64:
            raise ContractViolationError("seed must be a 64-bit unsigned integer")
        if self.target_op is not None and not 0 < self.target_op < 1:
            raise ContractViolationError("target_op must lie in (0, 1)")
