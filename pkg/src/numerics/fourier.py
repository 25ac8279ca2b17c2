"""
Discrete Characteristic-Function Convolution

The density of a sum of i.i.d. nonnegative terms is obtained by sampling
one term's density on a lattice, taking its discrete characteristic
function, raising it to the number of terms and inverting.
"""
from typing import Callable

import numpy as np


def lattice_masses(density: Callable[[np.ndarray], np.ndarray], dx: float, n_points: int) -> np.ndarray:
    """
    Probability masses of one term on the lattice k * dx, k = 0..n_points-1

    Each lattice point carries density(k dx) * dx; the origin carries half
    a cell.

    Args:
        density: Vectorized density of one term, finite at 0
        dx: Lattice spacing
        n_points: Lattice size

    Returns:
        Mass vector of length n_points
    """
    support = dx * np.arange(n_points)
    masses = np.asarray(density(support), dtype=float) * dx
    masses[0] *= 0.5
    return masses


def lattice_characteristic_function(masses: np.ndarray, length: int) -> np.ndarray:
    """Discrete characteristic function of a lattice distribution (zero-padded rfft)"""
    return np.fft.rfft(masses, n=length)


def n_fold_convolution(masses: np.ndarray, n_terms: int) -> np.ndarray:
    """
    Masses of the sum of n_terms independent copies, on the same lattice

    The transform length is doubled so that only mass beyond twice the
    lattice extent can wrap around.

    Args:
        masses: Single-term lattice masses
        n_terms: Number of i.i.d. terms (>= 1)

    Returns:
        Lattice masses of the sum, truncated to len(masses)
    """
    if n_terms == 1:
        return masses.copy()
    length = 2 * masses.size
    spectrum = lattice_characteristic_function(masses, length) ** n_terms
    summed = np.fft.irfft(spectrum, n=length)[: masses.size]
    # round-off of the inverse transform leaves tiny negative masses
    return np.clip(summed, 0.0, None)
