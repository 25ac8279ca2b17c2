"""
Tests for the Outage Service
"""
import math

import numpy as np
import pytest

from src.application.services.montecarlo_service import MonteCarloService
from src.application.services.outage_service import OutageService
from src.application.services.pdf_service import PdfService
from src.config.constants import OutageMethod
from src.domain.entities.outage import (
    FLAG_CLAMPED,
    FLAG_SHAPE_ROUNDED,
    ErrorKind,
    OutageEstimate,
)
from src.domain.value_objects.gamma_fit import GammaFit
from src.domain.value_objects.mc_config import McConfig
from src.domain.value_objects.system_params import SystemParams
from src.error_trace.exceptions import ContractViolationError, PrecisionError
from src.infrastructure.cache import InMemoryCacheManager


@pytest.fixture
def service():
    return OutageService(PdfService(cache=InMemoryCacheManager()))


def _integer_shape_cases(count: int = 20):
    rng = np.random.default_rng(20240101)
    cases = []
    for _ in range(count):
        fit_x = GammaFit(shape=float(rng.integers(1, 13)), scale=float(rng.uniform(0.2, 2.0)))
        fit_y = GammaFit(shape=float(rng.uniform(0.6, 15.0)), scale=float(rng.uniform(0.2, 3.0)))
        # keep c = ratio theta_Y / theta_X^2 between 1e-2 and 50
        c = float(10 ** rng.uniform(-2.0, math.log10(50.0)))
        ratio = c * fit_x.scale ** 2 / fit_y.scale
        cases.append((fit_x, fit_y, ratio))
    return cases


class TestOutageEstimate:

    def test_value_must_be_probability(self):
        with pytest.raises(ContractViolationError):
            OutageEstimate(value=1.5, method=OutageMethod.EXACT_NUMERIC)
        with pytest.raises(ContractViolationError):
            OutageEstimate(value=0.5, method=OutageMethod.EXACT_NUMERIC, err=-1.0)

    def test_to_dict(self):
        estimate = OutageEstimate(value=0.25, method="gamma_closed", flags=[FLAG_CLAMPED])
        data = estimate.to_dict()
        assert data["method"] == "gamma_closed"
        assert data["p_out"] == 0.25
        assert estimate.has_flag(FLAG_CLAMPED)


class TestGammaRoutes:
    """Closed form, numeric integral and asymptote of the gamma approximation"""

    @pytest.mark.parametrize("fit_x,fit_y,ratio", _integer_shape_cases())
    def test_closed_form_matches_numeric(self, service, fit_x, fit_y, ratio):
        closed = service.op_approx_closed(fit_x, fit_y, ratio, 1.0)
        numeric = service.op_approx_numeric(fit_x, fit_y, ratio, 1.0)
        assert closed.value == pytest.approx(numeric.value, abs=1e-6)
        assert not closed.has_flag(FLAG_SHAPE_ROUNDED)

    def test_closed_form_zero_threshold(self, service):
        fit_x, fit_y = GammaFit(4.0, 0.5), GammaFit(3.3, 1.2)
        assert service.op_approx_closed(fit_x, fit_y, 0.0, 1.0).value == pytest.approx(0.0, abs=1e-12)
        assert service.op_approx_numeric(fit_x, fit_y, 0.0, 1.0).value == 0.0

    def test_closed_form_records_rounding(self, service):
        fit_x = GammaFit(6.44, 0.49)
        estimate = service.op_approx_closed(fit_x, GammaFit(2.5, 2.0), 0.1, 1.0)
        assert estimate.has_flag(FLAG_SHAPE_ROUNDED)
        assert estimate.metadata["k_hat"] == 6
        assert estimate.metadata["shape_rounding"] == pytest.approx(6 - 6.44)

    def test_closed_form_order_limit(self, service):
        with pytest.raises(PrecisionError):
            service.op_approx_closed(GammaFit(3.0, 1.0), GammaFit(300.0, 1.0), 0.1, 1.0)

    def test_invalid_threshold(self, service):
        fit = GammaFit(2.0, 1.0)
        with pytest.raises(ContractViolationError):
            service.op_approx_numeric(fit, fit, -1.0, 1.0)
        with pytest.raises(ContractViolationError):
            service.op_asymptotic(fit, fit, 1.0, 0.0)

    def test_numeric_decreases_with_sir(self, service):
        params = SystemParams(n_elements=4)
        values = [
            service.gamma_estimate(params.with_updates(snr_db=snr), OutageMethod.GAMMA_NUMERIC).value
            for snr in (0.0, 10.0, 20.0, 30.0)
        ]
        assert all(a > b for a, b in zip(values, values[1:]))

    def test_asymptotic_clamped_at_low_sir(self, service):
        params = SystemParams(n_elements=4, snr_db=-30.0)
        estimate = service.gamma_estimate(params, OutageMethod.ASYMPTOTIC)
        assert estimate.value == 1.0
        assert estimate.has_flag(FLAG_CLAMPED)
        assert estimate.err_kind == ErrorKind.MODEL

    @pytest.mark.parametrize("n", [4, 8])
    def test_asymptotic_tracks_numeric_at_high_sir(self, service, n):
        params = SystemParams(n_elements=n, snr_db=60.0)
        asymptotic = service.gamma_estimate(params, OutageMethod.ASYMPTOTIC).value
        numeric = service.gamma_estimate(params, OutageMethod.GAMMA_NUMERIC).value
        assert 0.95 <= asymptotic / numeric <= 1.05

    def test_asymptote_power_law(self, service):
        params = SystemParams(n_elements=4, snr_db=30.0)
        k_x = service.pdf_service.gamma_fit_x(params).shape
        base = service.gamma_estimate(params, OutageMethod.ASYMPTOTIC).value
        doubled = service.gamma_estimate(
            params.with_updates(snr_db=30.0 + 10.0 * math.log10(2.0)), OutageMethod.ASYMPTOTIC
        ).value
        assert doubled / base == pytest.approx(2.0 ** (-k_x / 2), rel=1e-9)

    @pytest.mark.parametrize("method", [OutageMethod.GAMMA_CLOSED, OutageMethod.GAMMA_NUMERIC])
    def test_vanishing_threshold(self, service, method):
        params = SystemParams(n_elements=4, gamma_th_db=-100.0)
        assert service.gamma_estimate(params, method).value < 1e-10

    def test_route_dispatch(self, service):
        with pytest.raises(ContractViolationError):
            service.gamma_estimate(SystemParams(n_elements=4), OutageMethod.EXACT_NUMERIC)


class TestDiversity:
    """Diversity order, coding gain and the measured slope"""

    def test_coding_gain_identity(self, service):
        params = SystemParams(n_elements=8, sigma_ir=1.3, gamma_th_db=2.0, snr_db=35.0)
        report = service.diversity_report(params, with_slope=False)
        asymptotic = service.gamma_estimate(params, OutageMethod.ASYMPTOTIC).value
        assert report.asymptotic_op(params.gamma_bar_lin, params.gamma_th_lin) == pytest.approx(asymptotic, rel=1e-9)

    def test_orders(self, service):
        params = SystemParams(n_elements=16)
        report = service.diversity_report(params, with_slope=False)
        k_x = 16 * math.pi ** 2 / (16 - math.pi ** 2)
        assert report.diversity_order == pytest.approx(k_x / 2)
        assert report.printed_diversity_order == pytest.approx(k_x / 4)
        assert report.empirical_slope is None
        assert report.printed_coding_gain != pytest.approx(report.coding_gain)

    def test_order_linear_in_elements(self, service):
        orders = [service.diversity_report(SystemParams(n_elements=n), with_slope=False).diversity_order for n in (2, 4, 8)]
        assert orders[1] == pytest.approx(2 * orders[0], rel=1e-12)
        assert orders[2] == pytest.approx(4 * orders[0], rel=1e-12)

    @pytest.mark.parametrize("n", [4, 8])
    def test_slope_matches_diversity_order(self, service, n):
        params = SystemParams(n_elements=n)
        report = service.diversity_report(params)
        assert -report.empirical_slope == pytest.approx(report.diversity_order, rel=0.02)

    @pytest.mark.parametrize("n", [4, 8])
    def test_slope_independent_of_interference(self, service, n):
        quiet = service.empirical_diversity_slope(SystemParams(n_elements=n, inr_db=0.0))
        loud = service.empirical_diversity_slope(SystemParams(n_elements=n, inr_db=15.0))
        assert loud == pytest.approx(quiet, rel=0.02)


class TestExactOutage:
    """Numerical integration over the exact densities"""

    def test_decreasing_in_snr(self, service):
        values = [
            service.op_exact(SystemParams(n_elements=4, snr_db=snr)).value
            for snr in (0.0, 5.0, 10.0)
        ]
        assert all(0.0 <= v <= 1.0 for v in values)
        assert values[0] > values[1] > values[2]

    def test_gamma_numeric_close_for_larger_n(self, service):
        params = SystemParams(n_elements=8, snr_db=10.0)
        exact = service.op_exact(params)
        numeric = service.gamma_estimate(params, OutageMethod.GAMMA_NUMERIC)
        assert exact.method == OutageMethod.EXACT_NUMERIC
        assert exact.err_kind == ErrorKind.ABSOLUTE_BOUND
        assert numeric.value == pytest.approx(exact.value, rel=0.25)


@pytest.mark.slow
class TestAgainstSimulation:
    """Outage levels quoted for N=4 at 20 dB and N=8 at 10 dB"""

    @pytest.mark.parametrize("n,snr_db", [(4, 20.0), (8, 10.0)])
    def test_exact_inside_simulated_interval(self, service, n, snr_db):
        params = SystemParams(n_elements=n, snr_db=snr_db)
        simulated = MonteCarloService().estimate_op_mc(params, McConfig(n_samples=10_000_000, seed=17))
        # the quoted level of 1e-5 is read off a log-scale plot; one decade either side
        assert 1e-6 <= simulated.value <= 1e-4
        exact = service.op_exact(params)
        assert simulated.ci_low <= exact.value <= simulated.ci_high
