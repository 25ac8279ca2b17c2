"""
Tests for the Special Function Kernels
"""
from pathlib import Path
import math

import mpmath
import numpy as np
import pandas as pd
import pytest
from scipy import special

from src.domain.value_objects.precision import PrecisionPolicy
from src.error_trace.exceptions import ContractViolationError, DomainError, PoleError, PrecisionError
from src.numerics import compensated, specfun

ORACLE = Path(__file__).parent / "fixtures" / "special_function_oracle.csv"
ORACLE_ROWS = list(pd.read_csv(ORACLE, dtype={"expected": str}).itertuples(index=False))


def _evaluate(row) -> float:
    name = row.function
    if name == "ln_gamma":
        return specfun.ln_gamma(row.x)
    if name == "reg_lower_gamma":
        return specfun.reg_lower_gamma(row.p1, row.x)
    if name == "bessel_j0":
        return specfun.bessel_j0(row.x)
    if name == "bessel_i0":
        return specfun.bessel_i0(row.x)
    if name == "bessel_k0":
        return specfun.bessel_k0(row.x)
    if name == "kummer_1f1":
        return specfun.kummer_1f1(row.p1, row.p2, row.x)
    if name == "hyp_1f2":
        return specfun.hyp_1f2(row.p1, row.p2, row.p3, row.x)
    if name == "pcf_d":
        return specfun.pcf_d(row.p1, row.x)
    if name == "log_pcf_d":
        return specfun.log_pcf_d(row.p1, row.x)
    if name == "j0_zero":
        return float(specfun.j0_zeros(int(row.x))[-1])
    raise AssertionError(f"unknown oracle function {name}")


def _high_precision(row):
    x = mpmath.mpf(row.x)
    name = row.function
    if name == "ln_gamma":
        return mpmath.loggamma(x)
    if name == "reg_lower_gamma":
        return mpmath.gammainc(row.p1, 0, x, regularized=True)
    if name == "bessel_j0":
        return mpmath.besselj(0, x)
    if name == "bessel_i0":
        return mpmath.besseli(0, x)
    if name == "bessel_k0":
        return mpmath.besselk(0, x)
    if name == "kummer_1f1":
        return mpmath.hyp1f1(row.p1, row.p2, x)
    if name == "hyp_1f2":
        return mpmath.hyp1f2(row.p1, row.p2, row.p3, x)
    if name == "pcf_d":
        return mpmath.pcfd(row.p1, x)
    if name == "log_pcf_d":
        return mpmath.log(mpmath.pcfd(row.p1, x))
    if name == "j0_zero":
        return mpmath.besseljzero(0, int(row.x))
    raise AssertionError(f"unknown oracle function {name}")


def _row_id(row) -> str:
    params = "_".join(f"{p:g}" for p in (row.p1, row.p2, row.p3) if not math.isnan(p))
    return f"{row.function}[{params}]({row.x:g})" if params else f"{row.function}({row.x:g})"


@pytest.fixture(scope="module")
def mp50():
    with mpmath.workdps(50):
        yield


class TestOracleFixture:
    """Committed 50-digit reference values"""

    def test_fixture_shape(self):
        frame = pd.read_csv(ORACLE, dtype={"expected": str})
        assert len(frame) >= 1000
        assert set(frame.function) == {
            "ln_gamma", "reg_lower_gamma", "bessel_j0", "bessel_i0", "bessel_k0", "j0_zero",
            "kummer_1f1", "hyp_1f2", "pcf_d", "log_pcf_d",
        }
        digits = frame.expected[frame.expected != "0"].str.split("e").str[0].str.replace("-", "").str.replace(".", "")
        assert (digits.str.len() == 50).all()

    @pytest.mark.parametrize("row", ORACLE_ROWS, ids=_row_id)
    def test_fixture_value(self, row):
        expected = float(row.expected)
        assert _evaluate(row) == pytest.approx(expected, rel=row.rel_tol, abs=row.abs_tol)

    @pytest.mark.parametrize("row", ORACLE_ROWS[::20], ids=_row_id)
    def test_fixture_agrees_with_mpmath(self, mp50, row):
        expected = mpmath.mpf(row.expected)
        reference = _high_precision(row)
        assert abs(reference - expected) <= mpmath.mpf("1e-25") * max(abs(expected), 1)


class TestGammaAndBessel:
    """Thin wrappers with contract checks"""

    def test_ln_gamma_sign_between_poles(self):
        log_value, sign = specfun.ln_gamma_with_sign(-0.5)
        assert sign == -1.0
        assert log_value == pytest.approx(math.log(2.0 * math.sqrt(math.pi)), rel=1e-12)

    @pytest.mark.parametrize("x", [0.0, -1.0, -7.0])
    def test_ln_gamma_poles(self, x):
        with pytest.raises(PoleError):
            specfun.ln_gamma(x)

    def test_reg_lower_gamma_domain(self):
        assert specfun.reg_lower_gamma(3.0, 0.0) == 0.0
        with pytest.raises(DomainError):
            specfun.reg_lower_gamma(0.0, 1.0)
        with pytest.raises(DomainError):
            specfun.reg_lower_gamma(1.0, -0.1)

    @pytest.mark.parametrize("a", [0.25, 1.0, 2.5, 25.0, 100.0])
    def test_reg_lower_gamma_nondecreasing(self, a):
        values = np.array([specfun.reg_lower_gamma(a, x) for x in np.linspace(0.0, 10.0 * a, 200)])
        assert np.all(np.diff(values) >= -1e-15)
        assert values[0] == 0.0
        assert np.all((values >= 0.0) & (values <= 1.0))

    @pytest.mark.parametrize("a", [0.25, 1.0, 2.5, 25.0, 100.0])
    def test_reg_lower_gamma_saturates(self, a):
        assert specfun.reg_lower_gamma(a, 50.0 * a) == pytest.approx(1.0, abs=1e-12)

    def test_bessel_bounds(self):
        xs = np.linspace(-30.0, 30.0, 601)
        # Cephes evaluates I0 near the origin by a Chebyshev sum, good to a few ulp
        assert all(specfun.bessel_i0(x) >= 1.0 - 4 * np.finfo(float).eps for x in xs)
        assert all(abs(specfun.bessel_j0(x)) <= 1.0 for x in xs)
        assert specfun.bessel_i0(0.0) == pytest.approx(1.0, rel=1e-15)
        assert specfun.bessel_j0(0.0) == 1.0

    def test_k0_needs_positive_argument(self):
        with pytest.raises(DomainError):
            specfun.bessel_k0(0.0)

    def test_non_finite_input_rejected(self):
        with pytest.raises(DomainError):
            specfun.bessel_j0(float("nan"))

    def test_j0_zeros_are_roots(self):
        zeros = specfun.j0_zeros(20)
        assert np.all(np.diff(zeros) > 0)
        assert np.max(np.abs(special.j0(zeros))) < 1e-12


class TestDoubleDouble:

    def test_two_sum_recovers_rounding(self):
        s, err = compensated.two_sum(1.0, 1e-17)
        assert s == 1.0
        assert err == 1e-17

    def test_two_prod_recovers_rounding(self):
        a = 1.0 + 2.0 ** -30
        p, err = compensated.two_prod(a, a)
        assert p == 1.0 + 2.0 ** -29
        assert err == 2.0 ** -60

    def test_division_keeps_low_part(self):
        q = compensated.dd_div((1.0, 0.0), (3.0, 0.0))
        back = compensated.dd_mul(q, (3.0, 0.0))
        assert back[0] == 1.0
        assert abs(back[1]) < 1e-31


class TestHypergeometric:
    """Confluent and generalized series against 50-digit mpmath"""

    @pytest.mark.parametrize("a,b", [(0.5, 0.5), (0.5, 1.5), (2.0, 3.2), (1.0, 1.5), (3.0, 3.2)])
    @pytest.mark.parametrize("x", [0.3, 2.0, 10.0, -1.0, -5.0, -20.0])
    def test_kummer_matches_mpmath(self, mp50, a, b, x):
        expected = float(mpmath.hyp1f1(a, b, x))
        assert specfun.kummer_1f1(a, b, x) == pytest.approx(expected, rel=1e-9)

    @pytest.mark.parametrize("b", [0.5, 1.5, 3.2, 10.0])
    @pytest.mark.parametrize("x", [-20.0, -50.0])
    def test_kummer_large_a_negative_argument(self, mp50, b, x):
        # Kummer's transform leaves Phi(b - 25, b; -x), whose terms cancel by up to 1e15
        expected = float(mpmath.hyp1f1(25, b, x))
        assert specfun.kummer_1f1(25.0, b, x) == pytest.approx(expected, rel=1e-9)

    @pytest.mark.parametrize("a,b", [(7.3, 0.5), (2.0, 1.5), (12.0, 2.5)])
    @pytest.mark.parametrize("x", [0.3, 2.0, 10.0, 40.0])
    def test_kummer_positive_argument(self, mp50, a, b, x):
        expected = float(mpmath.hyp1f1(a, b, x))
        assert specfun.kummer_1f1(a, b, x) == pytest.approx(expected, rel=1e-9)

    @pytest.mark.parametrize("a", [-2.5, 0.5, 1.0, 3.7, 8.0])
    @pytest.mark.parametrize("b", [0.5, 1.5, 3.2, 6.0, 10.0])
    @pytest.mark.parametrize("x", [-12.0, -3.0, -0.5, 1.0, 8.0])
    def test_kummer_transform_identity(self, a, b, x):
        # both sides summed directly, without the transform
        direct = PrecisionPolicy(kummer_switch=math.inf)
        lhs = specfun.kummer_1f1(a, b, x, direct)
        rhs = math.exp(x) * specfun.kummer_1f1(b - a, b, -x, direct)
        assert lhs == pytest.approx(rhs, rel=1e-9)

    def test_log_kummer_large_parameters(self, mp50):
        log_value, sign = specfun.log_kummer_1f1(20.5, 30.5, 100.0)
        expected = float(mpmath.log(mpmath.hyp1f1(20.5, 30.5, 100.0)))
        assert sign == 1.0
        assert log_value == pytest.approx(expected, rel=1e-10)

    def test_kummer_terminates_for_negative_integer_a(self):
        # Phi(-2, b; x) is a polynomial of degree two
        b, x = 1.5, 0.7
        expected = 1.0 - 2.0 * x / b + x * x / (b * (b + 1.0))
        assert specfun.kummer_1f1(-2.0, b, x) == pytest.approx(expected, rel=1e-14)

    def test_kummer_pole(self):
        with pytest.raises(PoleError):
            specfun.kummer_1f1(1.0, -2.0, 0.5)

    def test_series_budget_exhausted(self):
        with pytest.raises(PrecisionError):
            specfun.kummer_1f1(1.0, 1.0, 200.0, PrecisionPolicy(max_terms=50))

    def test_cancellation_beyond_limit(self):
        # direct summation of Phi(8, 0.5; -20) cancels by about 1e19
        direct = PrecisionPolicy(kummer_switch=math.inf)
        with pytest.raises(PrecisionError):
            specfun.kummer_1f1(8.0, 0.5, -20.0, direct)

    @pytest.mark.parametrize("a", [0.5, 1.0, 2.5])
    @pytest.mark.parametrize("b1,b2", [(1.0, 1.0), (1.5, 3.0), (3.0, 1.5)])
    @pytest.mark.parametrize("x", [0.1, 1.0, 5.0, 20.0, -1.0])
    def test_1f2_matches_mpmath(self, mp50, a, b1, b2, x):
        expected = float(mpmath.hyp1f2(a, b1, b2, x))
        assert specfun.hyp_1f2(a, b1, b2, x) == pytest.approx(expected, rel=1e-9)

    @pytest.mark.parametrize("a,b1,b2,x", [
        (4.0, 0.5, 2.5, -100.0),
        (0.5, 0.5, 2.5, -100.0),
        (1.0, 0.5, 2.5, -100.0),
        (4.0, 1.0, 1.0, -100.0),
        (4.0, 0.5, 2.5, -50.0),
        (2.5, 1.0, 1.0, -50.0),
    ])
    def test_1f2_large_negative_argument(self, mp50, a, b1, b2, x):
        expected = float(mpmath.hyp1f2(a, b1, b2, x))
        assert specfun.hyp_1f2(a, b1, b2, x) == pytest.approx(expected, rel=1e-9)

    def test_1f2_pole(self):
        with pytest.raises(PoleError):
            specfun.hyp_1f2(1.0, 2.0, 0.0, 1.0)


class TestParabolicCylinder:
    """D_nu in both representations"""

    @pytest.mark.parametrize("nu", [-0.5, -1.0, -2.5, -6.0, -15.0])
    @pytest.mark.parametrize("z", [0.0, 0.5, 1.5, 3.0, 6.0])
    def test_negative_orders_match_mpmath(self, mp50, nu, z):
        expected = float(mpmath.pcfd(nu, z))
        assert specfun.pcf_d(nu, z) == pytest.approx(expected, rel=1e-8)

    @pytest.mark.parametrize("nu,z", [(-0.7, 3.9), (-1.0, 3.9), (-2.5, 3.0), (-25.0, 3.9)])
    def test_cancelling_two_term_region(self, mp50, nu, z):
        expected = float(mpmath.pcfd(nu, z))
        assert specfun.pcf_d(nu, z) == pytest.approx(expected, rel=1e-8)

    @pytest.mark.parametrize("z", [0.5, 1.0, 2.0, 6.0])
    def test_positive_fractional_order(self, mp50, z):
        expected = float(mpmath.pcfd(0.5, z))
        assert specfun.pcf_d(0.5, z) == pytest.approx(expected, rel=1e-8)

    def test_agrees_with_scipy(self):
        for nu, z in [(-1.0, 1.0), (-2.0, 1.0), (-3.5, 2.0)]:
            assert specfun.pcf_d(nu, z) == pytest.approx(special.pbdv(nu, z)[0], rel=1e-7)

    @pytest.mark.parametrize("nu", [float(n) for n in range(-10, 1)])
    @pytest.mark.parametrize("z", [0.1, 1.0, 5.0])
    def test_recurrence_between_orders(self, nu, z):
        # D_(nu+1) - z D_nu + nu D_(nu-1) = 0
        terms = [specfun.pcf_d(nu + 1, z), -z * specfun.pcf_d(nu, z), nu * specfun.pcf_d(nu - 1, z)]
        assert abs(sum(terms)) <= 1e-7 * max(abs(t) for t in terms)

    def test_log_form_deep_order(self, mp50):
        expected = float(mpmath.log(mpmath.pcfd(-60.0, 3.0)))
        assert specfun.log_pcf_d(-60.0, 3.0) == pytest.approx(expected, rel=1e-9)

    def test_log_form_does_not_underflow(self):
        value = specfun.log_pcf_d(-400.0, 10.0)
        assert math.isfinite(value)
        assert value < -700

    def test_domain(self):
        with pytest.raises(DomainError):
            specfun.pcf_d(-1.0, -0.5)
        with pytest.raises(DomainError):
            specfun.log_pcf_d(0.5, 1.0)
        with pytest.raises(PrecisionError):
            specfun.pcf_d(2.0, 1.0)

    def test_vector_helper(self):
        values = specfun.pcf_d_values([0.0, -1.0], 0.0)
        assert values == pytest.approx([1.0, math.sqrt(math.pi / 2.0)], rel=1e-12)


class TestPrecisionPolicy:

    def test_rejects_loose_tolerance(self):
        with pytest.raises(ContractViolationError):
            PrecisionPolicy(rel_tol=1e-3)

    def test_rejects_small_budget(self):
        with pytest.raises(ContractViolationError):
            PrecisionPolicy(max_terms=10)

    def test_rejects_inverted_cancellation_limits(self):
        with pytest.raises(ContractViolationError):
            PrecisionPolicy(compensation_threshold=1e20, cancellation_limit=1e18)
