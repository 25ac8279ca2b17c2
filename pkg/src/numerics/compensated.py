"""
Double-Double Arithmetic

A value is carried as an unevaluated sum (hi, lo) of two floats with
|lo| <= ulp(hi) / 2, which gives roughly 32 significant digits. The
hypergeometric series fall back to it when their terms cancel.
"""
from typing import Tuple

DoubleDouble = Tuple[float, float]

# 2^27 + 1, splits a double into two 26-bit halves
_SPLITTER = 134217729.0


def two_sum(a: float, b: float) -> DoubleDouble:
    """a + b as (rounded sum, exact rounding error)"""
    s = a + b
    bb = s - a
    return s, (a - (s - bb)) + (b - bb)


def _quick_two_sum(a: float, b: float) -> DoubleDouble:
    # requires |a| >= |b|
    s = a + b
    return s, b - (s - a)


def _split(a: float) -> DoubleDouble:
    t = _SPLITTER * a
    hi = t - (t - a)
    return hi, a - hi


def two_prod(a: float, b: float) -> DoubleDouble:
    """a * b as (rounded product, exact rounding error)"""
    p = a * b
    a_hi, a_lo = _split(a)
    b_hi, b_lo = _split(b)
    return p, ((a_hi * b_hi - p) + a_hi * b_lo + a_lo * b_hi) + a_lo * b_lo


def dd_add(x: DoubleDouble, y: DoubleDouble) -> DoubleDouble:
    s, e = two_sum(x[0], y[0])
    t, f = two_sum(x[1], y[1])
    s, e = _quick_two_sum(s, e + t)
    return _quick_two_sum(s, e + f)


def dd_mul(x: DoubleDouble, y: DoubleDouble) -> DoubleDouble:
    p, e = two_prod(x[0], y[0])
    return _quick_two_sum(p, e + (x[0] * y[1] + x[1] * y[0]))


def dd_div(x: DoubleDouble, y: DoubleDouble) -> DoubleDouble:
    """x / y by three rounds of long division"""
    q1 = x[0] / y[0]
    r = dd_add(x, dd_mul(y, (-q1, 0.0)))
    q2 = r[0] / y[0]
    r = dd_add(r, dd_mul(y, (-q2, 0.0)))
    q3 = r[0] / y[0]
    return dd_add(_quick_two_sum(q1, q2), (q3, 0.0))


def dd_scale(x: DoubleDouble, factor: float) -> DoubleDouble:
    """Multiply by an exact power of two"""
    return x[0] * factor, x[1] * factor
