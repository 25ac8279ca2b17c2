"""
Gamma Fit Value Object
"""
from dataclasses import dataclass
import math

from src.error_trace.exceptions import ContractViolationError


@dataclass(frozen=True)
class GammaFit:
    """Moment-matched gamma distribution (shape k, scale theta) - immutable"""

    shape: float
    scale: float

    def __post_init__(self):
        """Validate parameters"""
        for name in ("shape", "scale"):
            value = getattr(self, name)
            if not (math.isfinite(value) and value > 0):
                raise ContractViolationError(
                    f"gamma {name} must be positive",
                    details={name: value}
                )

    @property
    def mean(self) -> float:
        return self.shape * self.scale

    @property
    def variance(self) -> float:
        return self.shape * self.scale ** 2

    @classmethod
    def from_moments(cls, mean: float, variance: float) -> "GammaFit":
        """Match mean and variance: k = mean^2/var, theta = var/mean"""
        if not (mean > 0 and variance > 0):
            raise ContractViolationError(
                "moment matching needs positive mean and variance",
                details={"mean": mean, "variance": variance}
            )
        return cls(shape=mean ** 2 / variance, scale=variance / mean)

    def to_dict(self) -> dict:
        return {"shape": self.shape, "scale": self.scale}
