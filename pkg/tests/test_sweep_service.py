"""
Tests for the Sweep Service
"""
import pytest

from src.application.services.outage_service import OutageService
from src.application.services.pdf_service import PdfService
from src.application.services.sweep_service import SweepService, axis_values
from src.config.constants import OutageMethod, SweepAxis
from src.domain.value_objects.mc_config import McConfig
from src.domain.value_objects.system_params import SystemParams
from src.error_trace.exceptions import ContractViolationError, UsageError
from src.infrastructure.cache import InMemoryCacheManager


@pytest.fixture
def service():
    return SweepService(OutageService(PdfService(cache=InMemoryCacheManager())), workers=2)


class TestAxisValues:

    def test_even_spacing(self):
        assert axis_values(0.0, 40.0, 5, SweepAxis.SNR_DB) == [0.0, 10.0, 20.0, 30.0, 40.0]

    def test_element_axis_rounded_and_distinct(self):
        assert axis_values(2, 4, 5, SweepAxis.N_ELEMENTS) == [2, 3, 4]

    def test_single_step_rejected(self):
        with pytest.raises(UsageError):
            axis_values(0.0, 1.0, 1, SweepAxis.SNR_DB)


class TestSweep:

    def test_rows_in_axis_order(self, service):
        frame = service.sweep(
            SystemParams(n_elements=4),
            SweepAxis.SNR_DB,
            [30.0, 10.0, 20.0],
            [OutageMethod.GAMMA_CLOSED, OutageMethod.ASYMPTOTIC],
        )
        assert frame["axis_value"].tolist() == [30.0, 30.0, 10.0, 10.0, 20.0, 20.0]
        assert frame["method"].tolist()[:2] == ["gamma_closed", "asymptotic"]

    def test_inr_axis_shifts_outage(self, service):
        frame = service.sweep(
            SystemParams(n_elements=4, snr_db=20.0), SweepAxis.INR_DB, [0.0, 10.0], [OutageMethod.GAMMA_NUMERIC]
        )
        assert frame["p_out"].iloc[1] > frame["p_out"].iloc[0]

    def test_element_axis(self, service):
        frame = service.sweep(
            SystemParams(n_elements=4, snr_db=10.0), SweepAxis.N_ELEMENTS, [2, 8], [OutageMethod.GAMMA_NUMERIC]
        )
        assert frame["p_out"].iloc[1] < frame["p_out"].iloc[0]

    def test_surrogate_needs_model(self, service):
        with pytest.raises(ContractViolationError):
            service.evaluate(OutageMethod.SURROGATE, SystemParams(n_elements=4))

    def test_monte_carlo_route(self, service):
        estimate = service.evaluate(
            OutageMethod.MONTE_CARLO, SystemParams(n_elements=2, snr_db=3.0), McConfig(n_samples=2000, seed=1)
        )
        assert estimate.method == OutageMethod.MONTE_CARLO

    def test_needs_methods_and_points(self, service):
        params = SystemParams(n_elements=4)
        with pytest.raises(UsageError):
            service.sweep(params, SweepAxis.SNR_DB, [0.0, 1.0], [])
        with pytest.raises(UsageError):
            service.sweep(params, SweepAxis.SNR_DB, [0.0], [OutageMethod.GAMMA_CLOSED])
