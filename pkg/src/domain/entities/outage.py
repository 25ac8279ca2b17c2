"""
Outage Entities - Outage probability estimates and diversity reports
"""
from dataclasses import dataclass, field
from typing import Any, Dict, List, Optional
import math

from src.config.constants import OutageMethod
from src.error_trace.exceptions import ContractViolationError


class ErrorKind:
    """What the err field of an estimate measures"""
    ABSOLUTE_BOUND = "absolute_bound"
    CI_HALF_WIDTH = "ci_half_width"
    MODEL = "model"
    NONE = "none"


# Flags attached to estimates
FLAG_DEGRADED_ACCURACY = "degraded_accuracy"
FLAG_CLAMPED = "clamped"
FLAG_SHAPE_ROUNDED = "shape_rounded"
FLAG_WIDE_CI = "wide_ci"
FLAG_EXTRAPOLATION = "extrapolation"


@dataclass
class OutageEstimate:
    """An outage probability with its method tag and error descriptor"""

    value: float
    method: OutageMethod
    err: float = 0.0
    err_kind: str = ErrorKind.NONE
    flags: List[str] = field(default_factory=list)
    ci_low: Optional[float] = None
    ci_high: Optional[float] = None
    metadata: Dict[str, Any] = field(default_factory=dict)

    def __post_init__(self):
        """Validate estimate"""
        self.method = OutageMethod(self.method)
        if not (math.isfinite(self.value) and 0.0 <= self.value <= 1.0):
            raise ContractViolationError(
                "outage probability must lie in [0, 1]",
                details={"value": self.value, "method": self.method.value}
            )
        if not (math.isfinite(self.err) and self.err >= 0):
            raise ContractViolationError(
                "error descriptor must be nonnegative",
                details={"err": self.err}
            )

    def has_flag(self, flag: str) -> bool:
        return flag in self.flags

    def to_dict(self) -> dict:
        """Convert to dictionary"""
        return {
            "method": self.method.value,
            "p_out": self.value,
            "err": self.err,
            "err_kind": self.err_kind,
            "flags": list(self.flags),
            "ci_low": self.ci_low,
            "ci_high": self.ci_high,
            "metadata": self.metadata,
        }


@dataclass(frozen=True)
class DiversityReport:
    """High-SIR behaviour of the outage curve

    diversity_order is k_X/2. printed_diversity_order keeps the published
    N/4 * pi^2/(16 - pi^2), which is half of it, and printed_coding_gain the
    published gain with theta_Y and theta_X^2 in swapped places.
    """

    diversity_order: float
    coding_gain: float
    printed_diversity_order: float
    printed_coding_gain: Optional[float] = None
    empirical_slope: Optional[float] = None

    def asymptotic_op(self, gamma_bar_lin: float, gamma_th_lin: float = 1.0) -> float:
        """(G_c * gamma_bar / gamma_th) ** -G_d"""
        return (self.coding_gain * gamma_bar_lin / gamma_th_lin) ** (-self.diversity_order)

    def to_dict(self) -> dict:
        return {
            "diversity_order": self.diversity_order,
            "coding_gain": self.coding_gain,
            "printed_diversity_order": self.printed_diversity_order,
            "printed_coding_gain": self.printed_coding_gain,
            "empirical_slope": self.empirical_slope,
        }
