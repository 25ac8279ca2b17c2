"""
Special Function Kernels

Gamma, incomplete gamma and Bessel kernels wrap scipy.special (Cephes) with
the toolkit's contract checks. The confluent and generalized hypergeometric
series and the parabolic cylinder function are summed here in log space so
that large Pochhammer ratios never overflow. Series whose terms cancel are
summed a second time in double-double arithmetic.
"""
from typing import List, Sequence, Tuple
import math

import numpy as np
from scipy import integrate, special

from src.domain.value_objects.precision import DEFAULT_PRECISION, PrecisionPolicy
from src.error_trace.exceptions import DomainError, PoleError, PrecisionError
from src.numerics.compensated import DoubleDouble, dd_add, dd_div, dd_mul, dd_scale, two_sum


def _is_nonpositive_integer(value: float) -> bool:
    return value <= 0 and float(value).is_integer()


def _require_finite(**values: float) -> None:
    for name, value in values.items():
        if not math.isfinite(value):
            raise DomainError(f"{name} must be finite", details={name: value})


# ---------------------------------------------------------------------------
# Gamma family
# ---------------------------------------------------------------------------

def ln_gamma_with_sign(x: float) -> Tuple[float, float]:
    """
    Natural log of |Gamma(x)| together with the sign of Gamma(x)

    Args:
        x: Real argument, not a nonpositive integer

    Returns:
        (ln|Gamma(x)|, sign)
    """
    _require_finite(x=x)
    if _is_nonpositive_integer(x):
        raise PoleError("Gamma has a pole at nonpositive integers", details={"x": x})
    return float(special.gammaln(x)), float(special.gammasgn(x))


def ln_gamma(x: float) -> float:
    """ln|Gamma(x)|; raises PoleError at 0, -1, -2, ..."""
    return ln_gamma_with_sign(x)[0]


def reg_lower_gamma(a: float, x: float) -> float:
    """
    Regularized lower incomplete gamma P(a, x) = gamma(a, x) / Gamma(a)

    Args:
        a: Shape (> 0)
        x: Upper limit (>= 0)

    Returns:
        P(a, x) in [0, 1]
    """
    _require_finite(a=a)
    if not a > 0:
        raise DomainError("reg_lower_gamma needs a > 0", details={"a": a})
    if math.isnan(x) or x < 0:
        raise DomainError("reg_lower_gamma needs x >= 0", details={"x": x})
    if x == 0:
        return 0.0
    return float(special.gammainc(a, x))


# ---------------------------------------------------------------------------
# Bessel family
# ---------------------------------------------------------------------------

def bessel_j0(x: float) -> float:
    _require_finite(x=x)
    return float(special.j0(x))


def bessel_i0(x: float) -> float:
    _require_finite(x=x)
    return float(special.i0(x))


def bessel_k0(x: float) -> float:
    """Modified Bessel function of the second kind, order zero (x > 0)"""
    _require_finite(x=x)
    if not x > 0:
        raise DomainError("K0 is defined for x > 0 only", details={"x": x})
    return float(special.k0(x))


def j0_zeros(count: int) -> np.ndarray:
    """First `count` positive zeros of J0"""
    return special.jn_zeros(0, count)


# ---------------------------------------------------------------------------
# Hypergeometric series
# ---------------------------------------------------------------------------

# relative size of the neglected tail in each summation
_FAST_TAIL = 2.0 ** -60
_COMPENSATED_TAIL = 2.0 ** -106
# the double-double partial sums are renormalized by this power of two
_RESCALE_EXPONENT = 500
_RESCALE = 2.0 ** _RESCALE_EXPONENT


def _past_peak(log_ratio: float, k: int, x: float, upper: Sequence[float], lower: Sequence[float]) -> bool:
    # from here on the term ratios keep their sign and shrink
    return (
        log_ratio < 0
        and k + 1 > abs(x)
        and all(a + k + 1 > 0 for a in upper)
        and all(b + k + 1 > 0 for b in lower)
    )


def _tail_is_negligible(log_term: float, log_ratio: float, log_bound: float) -> bool:
    """Geometric bound term * r / (1 - r) on everything after the current term"""
    ratio = math.exp(log_ratio)
    return log_term + math.log(ratio / -math.expm1(log_ratio)) < log_bound


def _fast_log_series(
    upper: Sequence[float],
    lower: Sequence[float],
    x: float,
    policy: PrecisionPolicy,
    name: str,
) -> Tuple[float, float, float]:
    """
    Sum sum_k prod (a)_k / prod (b)_k * x^k / k! in log space

    Returns:
        (log|sum|, sign of sum, log of largest term over |sum|)
    """
    log_x = math.log(abs(x))
    x_sign = 1.0 if x > 0 else -1.0

    log_term, sign = 0.0, 1.0
    log_scale = 0.0
    scaled_sum = 1.0
    largest = 0.0

    for k in range(policy.max_terms):
        ratio_sign = x_sign
        log_ratio = log_x - math.log(k + 1)
        terminated = False
        for a in upper:
            factor = a + k
            if factor == 0:
                terminated = True
                break
            log_ratio += math.log(abs(factor))
            ratio_sign *= 1.0 if factor > 0 else -1.0
        if terminated:
            break
        for b in lower:
            factor = b + k
            log_ratio -= math.log(abs(factor))
            ratio_sign *= 1.0 if factor > 0 else -1.0

        log_term += log_ratio
        sign *= ratio_sign

        if log_term > log_scale:
            scaled_sum *= math.exp(log_scale - log_term)
            log_scale = log_term
        scaled_sum += sign * math.exp(log_term - log_scale)
        largest = max(largest, log_term)

        if _past_peak(log_ratio, k, x, upper, lower):
            magnitude = abs(scaled_sum)
            if magnitude > 0 and _tail_is_negligible(
                log_term - log_scale, log_ratio, math.log(_FAST_TAIL * magnitude)
            ):
                break
    else:
        raise PrecisionError(
            f"{name} series did not converge",
            details={"max_terms": policy.max_terms, "x": x, "upper": list(upper), "lower": list(lower)}
        )

    if scaled_sum == 0:
        return -math.inf, 1.0, math.inf
    log_sum = log_scale + math.log(abs(scaled_sum))
    return log_sum, 1.0 if scaled_sum > 0 else -1.0, largest - log_sum


def _compensated_log_series(
    upper: Sequence[DoubleDouble],
    lower: Sequence[DoubleDouble],
    x: float,
    policy: PrecisionPolicy,
    name: str,
) -> Tuple[float, float, float]:
    """
    The same series summed term by term in double-double arithmetic

    Parameters arrive as exact (hi, lo) pairs so that a shifted parameter
    such as b - a carries no rounding into the terms.

    Returns:
        (log|sum|, sign of sum, largest term over |sum|)
    """
    upper_approx = [hi + lo for hi, lo in upper]
    lower_approx = [hi + lo for hi, lo in lower]
    log_x = math.log(abs(x))

    term: DoubleDouble = (1.0, 0.0)
    total: DoubleDouble = (1.0, 0.0)
    largest = 1.0
    exponent = 0

    for k in range(policy.max_terms):
        numerator: DoubleDouble = (x, 0.0)
        terminated = False
        for a in upper:
            factor = dd_add(a, (float(k), 0.0))
            if factor == (0.0, 0.0):
                terminated = True
                break
            numerator = dd_mul(numerator, factor)
        if terminated:
            break
        denominator: DoubleDouble = (float(k + 1), 0.0)
        for b in lower:
            denominator = dd_mul(denominator, dd_add(b, (float(k), 0.0)))

        term = dd_div(dd_mul(term, numerator), denominator)
        total = dd_add(total, term)
        largest = max(largest, abs(term[0]))
        if abs(term[0]) > _RESCALE:
            term = dd_scale(term, 1.0 / _RESCALE)
            total = dd_scale(total, 1.0 / _RESCALE)
            largest /= _RESCALE
            exponent += _RESCALE_EXPONENT

        if any(a + k + 1 == 0 for a in upper_approx):
            continue
        # ratio of the next term to this one
        log_ratio = log_x - math.log(k + 2)
        log_ratio += sum(math.log(abs(a + k + 1)) for a in upper_approx)
        log_ratio -= sum(math.log(abs(b + k + 1)) for b in lower_approx)
        if (
            total[0] != 0
            and term[0] != 0
            and (_past_peak(log_ratio, k, x, upper_approx, lower_approx)
                 or _past_peak(log_ratio, k + 1, x, upper_approx, lower_approx))
            and _tail_is_negligible(
                math.log(abs(term[0])), log_ratio, math.log(_COMPENSATED_TAIL * abs(total[0]))
            )
        ):
            break
    else:
        raise PrecisionError(
            f"{name} series did not converge",
            details={"max_terms": policy.max_terms, "x": x, "upper": upper_approx, "lower": lower_approx}
        )

    if total[0] == 0:
        return -math.inf, 1.0, math.inf
    log_sum = exponent * math.log(2.0) + math.log(abs(total[0])) + total[1] / total[0]
    return log_sum, 1.0 if total[0] > 0 else -1.0, largest / abs(total[0])


def _log_series(
    upper: Sequence[DoubleDouble],
    lower: Sequence[DoubleDouble],
    x: float,
    policy: PrecisionPolicy,
    name: str,
) -> Tuple[float, float]:
    """
    Hypergeometric series pFq(upper; lower; x) as (log|sum|, sign)

    The log-space sum is tried first. When its largest term exceeds the
    result by more than policy.compensation_threshold the series is summed
    again in double-double, which absorbs cancellation up to
    policy.cancellation_limit.
    """
    if x == 0:
        return 0.0, 1.0

    log_sum, sign, log_cancellation = _fast_log_series(
        [hi + lo for hi, lo in upper], [hi + lo for hi, lo in lower], x, policy, name
    )
    if log_cancellation <= math.log(policy.compensation_threshold):
        return log_sum, sign

    log_sum, sign, cancellation = _compensated_log_series(upper, lower, x, policy, name)
    if not cancellation <= policy.cancellation_limit:
        raise PrecisionError(
            f"{name} series lost precision to cancellation",
            details={"x": x, "cancellation": cancellation}
        )
    return log_sum, sign


def log_kummer_1f1(a: float, b: float, x: float, policy: PrecisionPolicy = DEFAULT_PRECISION) -> Tuple[float, float]:
    """(log|Phi(a, b; x)|, sign), with Kummer's transform for negative x"""
    _require_finite(a=a, b=b, x=x)
    if _is_nonpositive_integer(b):
        raise PoleError("Phi(a, b; x) has a pole at nonpositive integer b", details={"b": b})

    if x < -policy.kummer_switch and not _is_nonpositive_integer(a):
        # Phi(a, b; x) = exp(x) Phi(b - a, b; -x), with b - a kept exact
        log_value, sign = _log_series([two_sum(b, -a)], [(b, 0.0)], -x, policy, "1F1")
        return x + log_value, sign
    return _log_series([(a, 0.0)], [(b, 0.0)], x, policy, "1F1")


def kummer_1f1(a: float, b: float, x: float, policy: PrecisionPolicy = DEFAULT_PRECISION) -> float:
    """
    Confluent hypergeometric function Phi(a, b; x) = 1F1(a; b; x)

    Args:
        a: Numerator parameter
        b: Denominator parameter, not a nonpositive integer
        x: Argument
        policy: Series limits

    Returns:
        Phi(a, b; x)
    """
    log_value, sign = log_kummer_1f1(a, b, x, policy)
    return sign * math.exp(log_value) if log_value > -math.inf else 0.0


def hyp_1f2(a: float, b1: float, b2: float, x: float, policy: PrecisionPolicy = DEFAULT_PRECISION) -> float:
    """
    Generalized hypergeometric function 1F2(a; b1, b2; x)

    Args:
        a: Numerator parameter
        b1, b2: Denominator parameters, not nonpositive integers
        x: Argument
        policy: Series limits

    Returns:
        1F2(a; b1, b2; x)
    """
    _require_finite(a=a, b1=b1, b2=b2, x=x)
    for name, b in (("b1", b1), ("b2", b2)):
        if _is_nonpositive_integer(b):
            raise PoleError("1F2 has a pole at nonpositive integer denominator parameters", details={name: b})
    log_value, sign = _log_series([(a, 0.0)], [(b1, 0.0), (b2, 0.0)], x, policy, "1F2")
    return sign * math.exp(log_value) if log_value > -math.inf else 0.0


# ---------------------------------------------------------------------------
# Parabolic cylinder function
# ---------------------------------------------------------------------------

def log_pcf_d(nu: float, z: float, policy: PrecisionPolicy = DEFAULT_PRECISION) -> float:
    """
    log D_nu(z) for nu < 0 and z >= 0

    Uses D_nu(z) = exp(-z^2/4) / Gamma(-nu) * int_0^inf s^(-nu-1) exp(-z s - s^2/2) ds,
    with the integrand scaled by its maximum so that no intermediate overflows.
    """
    _require_finite(nu=nu, z=z)
    if not nu < 0:
        raise DomainError("the integral form of D_nu needs nu < 0", details={"nu": nu})
    if z < 0:
        raise DomainError("D_nu is only evaluated at z >= 0", details={"z": z})

    power = -nu - 1.0
    epsrel = max(policy.rel_tol * 1e-2, 1e-13)

    if power <= 0:
        # integrable endpoint singularity s^power, handled by the algebraic weight
        upper = 40.0 if z <= 1.0 else min(40.0, 60.0 / z)
        value, _ = integrate.quad(
            lambda s: math.exp(-z * s - 0.5 * s * s),
            0.0, upper, weight="alg", wvar=(power, 0.0),
            epsabs=0.0, epsrel=epsrel, limit=200,
        )
        log_integral = math.log(value)
    else:
        peak = 2.0 * power / (z + math.sqrt(z * z + 4.0 * power))
        log_peak = math.log(peak)
        width = 1.0 / math.sqrt(power / peak ** 2 + 1.0)

        def scaled(s: float) -> float:
            if s <= 0:
                return 0.0
            return math.exp(
                power * (math.log(s) - log_peak) - z * (s - peak) - 0.5 * (s * s - peak * peak)
            )

        # strong concavity of the log-integrand bounds the mass beyond peak + 40
        lower = max(0.0, peak - 40.0)
        upper = peak + 40.0
        inner = {peak + k * width for k in (-10.0, -3.0, 0.0, 3.0, 10.0)}
        edges = [lower, *sorted(p for p in inner if lower < p < upper), upper]
        total = 0.0
        for left, right in zip(edges[:-1], edges[1:]):
            piece, _ = integrate.quad(scaled, left, right, epsabs=0.0, epsrel=epsrel, limit=200)
            total += piece
        log_integral = math.log(total) + power * log_peak - z * peak - 0.5 * peak * peak

    return -0.25 * z * z - ln_gamma(-nu) + log_integral




def _pcf_two_term(nu: float, z: float, policy: PrecisionPolicy) -> Tuple[float, float]:
    """Two-term confluent representation; returns (value, largest term magnitude)"""
    u = 0.5 * z * z
    prefactor = 2.0 ** (0.5 * nu) * math.exp(-0.25 * z * z)

    first = 0.0
    inv_gamma_first = float(special.rgamma(0.5 * (1.0 - nu)))
    if inv_gamma_first != 0.0:
        first = math.sqrt(math.pi) * inv_gamma_first * kummer_1f1(-0.5 * nu, 0.5, u, policy)

    second = 0.0
    inv_gamma_second = float(special.rgamma(-0.5 * nu))
    if inv_gamma_second != 0.0 and z != 0.0:
        second = math.sqrt(2.0 * math.pi) * z * inv_gamma_second * kummer_1f1(0.5 * (1.0 - nu), 1.5, u, policy)

    return prefactor * (first - second), prefactor * max(abs(first), abs(second))


def _pcf_without_cancellation(nu: float, z: float, policy: PrecisionPolicy) -> float:
    if nu < 0:
        return math.exp(log_pcf_d(nu, z, policy))
    # D_nu = z D_(nu-1) - (nu-1) D_(nu-2); both terms are nonnegative for 0 < nu <= 1
    lower_one = math.exp(-0.25 * z * z) if nu == 1 else math.exp(log_pcf_d(nu - 1.0, z, policy))
    lower_two = math.exp(log_pcf_d(nu - 2.0, z, policy))
    return z * lower_one - (nu - 1.0) * lower_two


def pcf_d(nu: float, z: float, policy: PrecisionPolicy = DEFAULT_PRECISION) -> float:
    """
    Parabolic cylinder function D_nu(z) for nu <= 1 and z >= 0

    Small arguments use the two-term confluent representation as long as
    its terms cancel by less than policy.pcf_cancellation_limit. Everything
    else goes to the integral form (nu < 0) or to one step of the order
    recurrence (0 < nu <= 1), neither of which cancels.

    Args:
        nu: Order (<= 1)
        z: Argument (>= 0)
        policy: Tolerances and regime switches

    Returns:
        D_nu(z)
    """
    _require_finite(nu=nu, z=z)
    if z < 0:
        raise DomainError("D_nu is only evaluated at z >= 0", details={"z": z})
    if nu > 1:
        raise PrecisionError(
            "D_nu is validated for nu <= 1 only",
            details={"nu": nu, "z": z}
        )
    if nu == 0:
        return math.exp(-0.25 * z * z)

    if z > policy.pcf_series_max_z or nu < policy.pcf_series_min_nu:
        return _pcf_without_cancellation(nu, z, policy)

    try:
        value, largest = _pcf_two_term(nu, z, policy)
        stable = largest == 0 or abs(value) * policy.pcf_cancellation_limit >= largest
    except PrecisionError:
        stable = False
    if stable:
        return value
    return _pcf_without_cancellation(nu, z, policy)


def pcf_d_values(nus: Sequence[float], z: float, policy: PrecisionPolicy = DEFAULT_PRECISION) -> List[float]:
    """D_nu(z) for several orders at one argument"""
    return [pcf_d(nu, z, policy) for nu in nus]
