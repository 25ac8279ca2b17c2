"""
Precision Policy Value Object
"""
from dataclasses import dataclass

from src.error_trace.exceptions import ContractViolationError


@dataclass(frozen=True)
class PrecisionPolicy:
    """
    Tolerances and regime switches for the special-function kernels

    Series are always summed to double-precision round-off; rel_tol governs
    the adaptive quadratures behind the integral form of D_nu.
    """

    rel_tol: float = 1e-10
    max_terms: int = 500
    # |x| above which the confluent series is evaluated through Kummer's transform
    kummer_switch: float = 0.0
    # z above which D_nu leaves the two-term representation
    pcf_series_max_z: float = 4.0
    # orders below which D_nu always uses the integral form
    pcf_series_min_nu: float = -30.0
    # largest-term to result ratio above which a series is re-summed in double-double
    compensation_threshold: float = 1e2
    # ratio tolerated by the double-double sum before cancellation is declared
    cancellation_limit: float = 1e18
    # ratio tolerated between the two D_nu terms before switching form
    pcf_cancellation_limit: float = 1e3

    def __post_init__(self):
        """Validate policy"""
        if not 0 < self.rel_tol <= 1e-4:
            raise ContractViolationError("rel_tol must lie in (0, 1e-4]")
        if self.max_terms < 50:
            raise ContractViolationError("max_terms must be at least 50")
        if not 1.0 <= self.compensation_threshold <= self.cancellation_limit:
            raise ContractViolationError("compensation_threshold must lie in [1, cancellation_limit]")


DEFAULT_PRECISION = PrecisionPolicy()
