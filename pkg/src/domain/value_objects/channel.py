"""
Channel Realization Value Objects
"""
from dataclasses import dataclass
import math

import numpy as np

from src.error_trace.exceptions import ContractViolationError

TWO_PI = 2.0 * math.pi


def _frozen_vector(values, name: str) -> np.ndarray:
    array = np.array(values, dtype=float, copy=True).reshape(-1)
    if np.any(~np.isfinite(array)):
        raise ContractViolationError(f"{name} contains non-finite entries")
    array.setflags(write=False)
    return array


@dataclass(frozen=True, eq=False)
class ChannelDraw:
    """One realization of every channel of the link - immutable

    The phase of h_I is drawn with the magnitudes; x_S, x_I are unit-norm
    and never materialized, and theta* is absorbed into theta_prime.
    """

    h_mag: np.ndarray
    g_mag: np.ndarray
    alpha_mag: np.ndarray
    beta_mag: np.ndarray
    theta_prime: np.ndarray
    h_i_mag: float
    h_i_phase: float = 0.0

    def __post_init__(self):
        """Freeze arrays and validate magnitudes and phases"""
        for name in ("h_mag", "g_mag", "alpha_mag", "beta_mag", "theta_prime"):
            object.__setattr__(self, name, _frozen_vector(getattr(self, name), name))

        n = self.h_mag.size
        if any(getattr(self, name).size != n for name in ("g_mag", "alpha_mag", "beta_mag", "theta_prime")):
            raise ContractViolationError("channel vectors must share one length")
        for name in ("h_mag", "g_mag", "alpha_mag", "beta_mag"):
            if np.any(getattr(self, name) < 0):
                raise ContractViolationError(f"{name} must be nonnegative")
        if np.any((self.theta_prime < 0) | (self.theta_prime >= TWO_PI)):
            raise ContractViolationError("theta_prime entries must lie in [0, 2pi)")
        if not (math.isfinite(self.h_i_mag) and self.h_i_mag >= 0):
            raise ContractViolationError("h_i_mag must be nonnegative")
        object.__setattr__(self, "h_i_mag", float(self.h_i_mag))
        object.__setattr__(self, "h_i_phase", float(self.h_i_phase) % TWO_PI)

    @property
    def n_elements(self) -> int:
        """Number of reflecting elements in the draw"""
        return int(self.h_mag.size)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, ChannelDraw):
            return NotImplemented
        return (
            np.array_equal(self.h_mag, other.h_mag)
            and np.array_equal(self.g_mag, other.g_mag)
            and np.array_equal(self.alpha_mag, other.alpha_mag)
            and np.array_equal(self.beta_mag, other.beta_mag)
            and np.array_equal(self.theta_prime, other.theta_prime)
            and self.h_i_mag == other.h_i_mag
            and self.h_i_phase == other.h_i_phase
        )

    def rotated(self, phase: float) -> "ChannelDraw":
        """Same draw with every interference phase shifted by a common angle"""
        shifted = np.mod(self.theta_prime + phase, TWO_PI)
        shifted[shifted >= TWO_PI] = 0.0
        return ChannelDraw(
            h_mag=self.h_mag,
            g_mag=self.g_mag,
            alpha_mag=self.alpha_mag,
            beta_mag=self.beta_mag,
            theta_prime=shifted,
            h_i_mag=self.h_i_mag,
            h_i_phase=self.h_i_phase + phase,
        )


@dataclass(frozen=True)
class SirSample:
    """Instantaneous SIR of one draw, gamma = gamma_bar X^2 / Y^2"""

    x_value: float
    y_value: float
    sir: float

    def __post_init__(self):
        if self.x_value < 0 or self.y_value < 0 or self.sir < 0:
            raise ContractViolationError("SIR sample entries must be nonnegative")
