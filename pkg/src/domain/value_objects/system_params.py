"""
System Parameters Value Object
"""
from dataclasses import dataclass, field, replace
from typing import Any, Dict
import math

from src.error_trace.exceptions import ContractViolationError
from src.utilities.helpers import db_to_linear


@dataclass(frozen=True)
class SystemParams:
    """Physical parameters of one RIS-assisted D2D scenario - immutable

    Ratios are given in dB; the linear values are derived once, here.
    """

    n_elements: int
    sigma_sr: float = 1.0
    sigma_rd: float = 1.0
    sigma_ir: float = 1.0
    sigma_id: float = 1.0
    snr_db: float = 0.0
    inr_db: float = 0.0
    gamma_th_db: float = 0.0

    snr_lin: float = field(init=False, repr=False, compare=False)
    inr_lin: float = field(init=False, repr=False, compare=False)
    gamma_bar_lin: float = field(init=False, repr=False, compare=False)
    gamma_th_lin: float = field(init=False, repr=False, compare=False)
    threshold_ratio: float = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        """Validate parameters and derive linear ratios"""
        if isinstance(self.n_elements, bool) or int(self.n_elements) != self.n_elements:
            raise ContractViolationError(
                "n_elements must be an integer",
                details={"n_elements": self.n_elements}
            )
        if self.n_elements < 1:
            raise ContractViolationError(
                "n_elements must be at least 1",
                details={"n_elements": self.n_elements}
            )
        object.__setattr__(self, "n_elements", int(self.n_elements))

        for name in ("sigma_sr", "sigma_rd", "sigma_ir", "sigma_id"):
            value = getattr(self, name)
            if not (math.isfinite(value) and value > 0):
                raise ContractViolationError(
                    f"{name} must be a positive finite number",
                    details={name: value}
                )
        for name in ("snr_db", "inr_db", "gamma_th_db"):
            if not math.isfinite(getattr(self, name)):
                raise ContractViolationError(f"{name} must be finite")

        object.__setattr__(self, "snr_lin", db_to_linear(self.snr_db))
        object.__setattr__(self, "inr_lin", db_to_linear(self.inr_db))
        object.__setattr__(self, "gamma_bar_lin", db_to_linear(self.snr_db - self.inr_db))
        object.__setattr__(self, "gamma_th_lin", db_to_linear(self.gamma_th_db))
        # gamma_th / gamma_bar, formed in dB so equal composites give equal ratios
        object.__setattr__(
            self, "threshold_ratio",
            db_to_linear(self.gamma_th_db - self.snr_db + self.inr_db)
        )
        if not self.gamma_bar_lin > 0:
            raise ContractViolationError("average SIR must be strictly positive")

    @property
    def gamma_bar_db(self) -> float:
        """Average SIR in dB"""
        return self.snr_db - self.inr_db

    @property
    def cascade_scale(self) -> float:
        """sigma_sr * sigma_rd, the scale of one double-Rayleigh term"""
        return self.sigma_sr * self.sigma_rd

    @property
    def interference_cascade_power(self) -> float:
        """sigma_ir^2 * sigma_rd^2, the power of one reflected interference term"""
        return (self.sigma_ir * self.sigma_rd) ** 2

    @property
    def direct_interference_power(self) -> float:
        """sigma_id^2"""
        return self.sigma_id ** 2

    def with_updates(self, **changes: Any) -> "SystemParams":
        """Copy with some fields replaced"""
        return replace(self, **changes)

    def to_dict(self) -> Dict[str, Any]:
        """Convert to dictionary"""
        return {
            "n_elements": self.n_elements,
            "sigma_sr": self.sigma_sr,
            "sigma_rd": self.sigma_rd,
            "sigma_ir": self.sigma_ir,
            "sigma_id": self.sigma_id,
            "snr_db": self.snr_db,
            "inr_db": self.inr_db,
            "gamma_th_db": self.gamma_th_db,
            "snr_lin": self.snr_lin,
            "inr_lin": self.inr_lin,
            "gamma_bar_lin": self.gamma_bar_lin,
            "gamma_th_lin": self.gamma_th_lin,
        }

    @classmethod
    def unit_variance(cls, n_elements: int, **overrides: Any) -> "SystemParams":
        """Scenario with all channel parameters equal to one"""
        return cls(n_elements=n_elements, **overrides)
