"""
Panel Quadrature for Oscillatory Bessel Integrals
"""
from functools import lru_cache
from typing import Callable, Sequence, Tuple
import math

import numpy as np
from scipy import optimize, special

from src.error_trace.exceptions import PrecisionError

HIGH_ORDER = 20
LOW_ORDER = 10
# uniform breakpoints laid over the envelope support, merged with the J0 zeros
ENVELOPE_PANELS = 200
# J0 zeros integrated panel by panel before the tail is extrapolated
MAX_OSCILLATION_PANELS = 4000
ENVELOPE_DROP = math.log(1e-18)


@lru_cache(maxsize=4)
def _legendre(order: int) -> Tuple[np.ndarray, np.ndarray]:
    return np.polynomial.legendre.leggauss(order)


@lru_cache(maxsize=1)
def _j0_zeros(count: int) -> np.ndarray:
    zeros = special.jn_zeros(0, count)
    zeros.setflags(write=False)
    return zeros


def panel_integrals(fn: Callable[[np.ndarray], np.ndarray], edges: np.ndarray, order: int) -> np.ndarray:
    """
    Gauss-Legendre integral of fn over each panel [edges[i], edges[i+1]]

    Args:
        fn: Vectorized integrand
        edges: Increasing panel boundaries
        order: Nodes per panel

    Returns:
        One integral per panel
    """
    nodes, weights = _legendre(order)
    left = edges[:-1, None]
    half = 0.5 * np.diff(edges)[:, None]
    points = left + half * (nodes[None, :] + 1.0)
    return np.sum(fn(points) * weights[None, :], axis=1) * half[:, 0]


def integrate_panels(fn: Callable[[np.ndarray], np.ndarray], edges: Sequence[float]) -> Tuple[np.ndarray, float]:
    """Per-panel integrals with a 20-vs-10 point error estimate"""
    edges = np.asarray(edges, dtype=float)
    fine = panel_integrals(fn, edges, HIGH_ORDER)
    coarse = panel_integrals(fn, edges, LOW_ORDER)
    return fine, float(np.sum(np.abs(fine - coarse)))


def wynn_epsilon(partial_sums: Sequence[float]) -> Tuple[float, float]:
    """
    Wynn's epsilon extrapolation of a sequence of partial sums

    Args:
        partial_sums: Partial sums of a slowly converging (alternating) series

    Returns:
        (limit estimate, difference between the last two even-column estimates)
    """
    sums = np.asarray(partial_sums, dtype=float)
    if sums.size < 3:
        return float(sums[-1]), math.inf

    previous = np.zeros(sums.size + 1)
    current = sums.copy()
    estimates = [float(sums[-1])]
    for column in range(1, sums.size):
        diff = current[1:] - current[:-1]
        with np.errstate(divide="ignore", invalid="ignore"):
            following = previous[1:current.size] + 1.0 / diff
        if not np.all(np.isfinite(following)):
            break
        previous, current = current, following
        if column % 2 == 0:
            estimates.append(float(current[-1]))
        if current.size == 1:
            break

    if len(estimates) < 2:
        return estimates[-1], math.inf
    return estimates[-1], abs(estimates[-1] - estimates[-2])


def envelope_cutoff(log_envelope: Callable[[float], float], start: float) -> float:
    """
    First rho beyond which a decreasing log-envelope has dropped by 1e-18

    Args:
        log_envelope: log of the integrand's magnitude bound
        start: A point at or past the envelope's maximum
    """
    target = log_envelope(start) + ENVELOPE_DROP
    upper = max(start, 1e-3) * 2.0
    for _ in range(200):
        if log_envelope(upper) < target:
            break
        upper *= 2.0
    else:
        raise PrecisionError("integrand envelope does not decay", details={"start": start})
    if log_envelope(start) <= target:
        return start
    return float(optimize.brentq(lambda r: log_envelope(r) - target, start, upper, xtol=1e-10 * upper))


def hankel_j0_integral(
    kernel: Callable[[np.ndarray], np.ndarray],
    y: float,
    cutoff: float,
    rel_tol: float = 1e-6,
) -> Tuple[float, float]:
    """
    int_0^inf rho J0(y rho) kernel(rho) d rho for a kernel negligible beyond cutoff

    Panels run between consecutive zeros of J0(y rho), refined by a uniform
    grid over [0, cutoff]. When more than MAX_OSCILLATION_PANELS zeros fall
    inside the cutoff, the remaining alternating tail is extrapolated with
    Wynn's epsilon algorithm.

    Args:
        kernel: Vectorized, smooth, nonoscillatory factor
        y: Transform variable (>= 0)
        cutoff: rho beyond which kernel * rho is negligible
        rel_tol: Relative accuracy requested

    Returns:
        (integral, error estimate)
    """
    def integrand(rho: np.ndarray) -> np.ndarray:
        return rho * special.j0(y * rho) * kernel(rho)

    uniform = np.linspace(0.0, cutoff, ENVELOPE_PANELS + 1)
    if y == 0:
        values, err = integrate_panels(integrand, uniform)
        return float(np.sum(values)), err

    zeros = _j0_zeros(MAX_OSCILLATION_PANELS) / y
    inside = zeros[zeros < cutoff]
    if inside.size < MAX_OSCILLATION_PANELS:
        edges = np.union1d(uniform, inside)
        values, err = integrate_panels(integrand, edges)
        return float(np.sum(values)), err

    # the oscillation outruns the panel cap: integrate zero to zero, then extrapolate
    head_edges = np.union1d(np.linspace(0.0, inside[0], 33), inside)
    head, err = integrate_panels(integrand, head_edges)
    first_zero_index = head_edges.size - inside.size
    lead = float(np.sum(head[:first_zero_index]))
    lobes = head[first_zero_index:]
    partial = lead + np.cumsum(lobes)
    limit, extrapolation_err = wynn_epsilon(partial[-40:])
    total_err = err + extrapolation_err
    if not math.isfinite(limit) or total_err > rel_tol * abs(limit) + 1e-12:
        raise PrecisionError(
            "oscillatory tail of the Bessel integral did not converge",
            details={"y": y, "cutoff": cutoff, "error": total_err, "value": limit}
        )
    return limit, total_err
