"""
Moment Entity - A sample moment with its bootstrap interval
"""
from dataclasses import dataclass

from src.config.constants import MomentExpression


@dataclass(frozen=True)
class MomentEstimate:
    """Sample moment of X or Y^2 and a percentile bootstrap interval"""

    expression: MomentExpression
    value: float
    ci_low: float
    ci_high: float
    n_samples: int

    def contains(self, reference: float) -> bool:
        return self.ci_low <= reference <= self.ci_high

    def relative_error(self, reference: float) -> float:
        """|value - reference| / |reference|"""
        return abs(self.value - reference) / abs(reference)

    def to_dict(self) -> dict:
        return {
            "expression": MomentExpression(self.expression).value,
            "value": self.value,
            "ci_low": self.ci_low,
            "ci_high": self.ci_high,
            "n_samples": self.n_samples,
        }
