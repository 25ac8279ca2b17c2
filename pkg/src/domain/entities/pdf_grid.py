"""
PdfGrid Entity - A density sampled on a support grid
"""
from dataclasses import dataclass, field
from typing import Any, Dict, Optional

import numpy as np
import pandas as pd
from scipy.integrate import cumulative_trapezoid, trapezoid

from src.config.constants import PdfMethod
from src.error_trace.exceptions import ContractViolationError


def _readonly(values) -> np.ndarray:
    array = np.array(values, dtype=float, copy=True).reshape(-1)
    array.setflags(write=False)
    return array


@dataclass(frozen=True, eq=False)
class PdfGrid:
    """Numerical carrier for f_X and f_Y

    Point densities are integrated with the trapezoid rule. Histograms carry
    their bin_edges, and their mass is density times bin width.
    """

    support: np.ndarray
    density: np.ndarray
    method: PdfMethod
    bin_edges: Optional[np.ndarray] = None
    metadata: Dict[str, Any] = field(default_factory=dict)

    def __post_init__(self):
        """Validate grid"""
        object.__setattr__(self, "support", _readonly(self.support))
        object.__setattr__(self, "density", _readonly(self.density))
        object.__setattr__(self, "method", PdfMethod(self.method))
        if self.bin_edges is not None:
            object.__setattr__(self, "bin_edges", _readonly(self.bin_edges))
            if self.bin_edges.size != self.support.size + 1:
                raise ContractViolationError("bin_edges must have one more entry than support")

        if self.support.size != self.density.size or self.support.size < 2:
            raise ContractViolationError(
                "support and density must have equal length of at least 2",
                details={"support": self.support.size, "density": self.density.size}
            )
        if np.any(np.diff(self.support) <= 0):
            raise ContractViolationError("support must be strictly increasing")
        if np.any(~np.isfinite(self.density)) or np.any(self.density < 0):
            raise ContractViolationError("density must be finite and nonnegative")

    def total_mass(self) -> float:
        """Integral of the density over the support"""
        if self.bin_edges is not None:
            return float(np.sum(self.density * np.diff(self.bin_edges)))
        return float(trapezoid(self.density, self.support))

    def cdf(self) -> np.ndarray:
        """Cumulative distribution on the support points"""
        if self.bin_edges is not None:
            widths = np.diff(self.bin_edges)
            # midpoint of each bin carries half of its own mass
            return np.cumsum(self.density * widths) - 0.5 * self.density * widths
        return cumulative_trapezoid(self.density, self.support, initial=0.0)

    def evaluate(self, values) -> np.ndarray:
        """Linear interpolation of the density, zero outside the support"""
        return np.interp(values, self.support, self.density, left=0.0, right=0.0)

    def mode(self) -> float:
        """Support point of maximal density"""
        return float(self.support[int(np.argmax(self.density))])

    def l1_distance(self, other: "PdfGrid") -> float:
        """Integral of |f - g|, taken on this grid's support"""
        gap = np.abs(self.density - other.evaluate(self.support))
        if self.bin_edges is not None:
            return float(np.sum(gap * np.diff(self.bin_edges)))
        return float(trapezoid(gap, self.support))

    def l1_distance_to(self, fn) -> float:
        """L1 distance to a callable density"""
        reference = np.asarray(fn(self.support), dtype=float)
        gap = np.abs(self.density - reference)
        if self.bin_edges is not None:
            return float(np.sum(gap * np.diff(self.bin_edges)))
        return float(trapezoid(gap, self.support))

    def to_frame(self) -> pd.DataFrame:
        """Rows of the `value,density,method` CSV schema"""
        return pd.DataFrame({
            "value": self.support,
            "density": self.density,
            "method": self.method.value,
        })
