"""
Tests for the Channel Model
"""
import math

import numpy as np
import pytest

from src.application.services.channel_service import ChannelService
from src.domain.value_objects.channel import ChannelDraw, SirSample
from src.domain.value_objects.system_params import SystemParams
from src.error_trace.exceptions import ContractViolationError
from src.numerics.streams import derive_seed, stream, substream


class TestSystemParams:
    """dB handling and validation"""

    def test_linear_values_derived_once(self):
        params = SystemParams(n_elements=4, snr_db=20.0, inr_db=10.0, gamma_th_db=3.0)
        assert params.snr_lin == pytest.approx(100.0)
        assert params.inr_lin == pytest.approx(10.0)
        assert params.gamma_bar_lin == pytest.approx(10.0)
        assert params.gamma_bar_db == pytest.approx(10.0)
        assert params.threshold_ratio == pytest.approx(10 ** 0.3 / 10.0)

    def test_equal_composites_give_equal_ratios(self):
        first = SystemParams(n_elements=4, snr_db=25.0, inr_db=5.0)
        second = SystemParams(n_elements=4, snr_db=20.0, inr_db=0.0)
        assert first.threshold_ratio == second.threshold_ratio

    @pytest.mark.parametrize("changes", [
        {"n_elements": 0},
        {"n_elements": 2.5},
        {"sigma_sr": 0.0},
        {"sigma_id": -1.0},
        {"snr_db": float("inf")},
    ])
    def test_rejects_invalid(self, changes):
        values = {"n_elements": 4, **changes}
        with pytest.raises(ContractViolationError):
            SystemParams(**values)

    def test_with_updates_keeps_other_fields(self, unit_params):
        moved = unit_params.with_updates(snr_db=30.0)
        assert moved.snr_db == 30.0
        assert moved.n_elements == unit_params.n_elements
        assert moved.gamma_bar_lin == pytest.approx(1000.0)


class TestChannelDraw:
    """Single realizations and the SIR they imply"""

    def _draw(self, **changes):
        values = dict(
            h_mag=[1.0, 2.0],
            g_mag=[3.0, 1.0],
            alpha_mag=[1.0, 1.0],
            beta_mag=[1.0, 1.0],
            theta_prime=[0.0, math.pi],
            h_i_mag=2.0,
            h_i_phase=0.0,
        )
        values.update(changes)
        return ChannelDraw(**values)

    def test_sir_of_hand_built_draw(self):
        params = SystemParams(n_elements=2, snr_db=10.0, inr_db=0.0)
        sample = ChannelService().instantaneous_sir(params, self._draw())
        assert sample.x_value == pytest.approx(5.0)
        # the two reflected terms cancel, leaving the direct link
        assert sample.y_value == pytest.approx(2.0)
        assert sample.sir == pytest.approx(10.0 * 25.0 / 4.0)

    def test_dimension_mismatch(self):
        params = SystemParams(n_elements=3)
        with pytest.raises(ContractViolationError):
            ChannelService().instantaneous_sir(params, self._draw())

    def test_common_phase_rotation_keeps_sir(self):
        params = SystemParams(n_elements=8, snr_db=5.0)
        service = ChannelService()
        draw = service.sample_channels(params, stream(7, 0))
        original = service.instantaneous_sir(params, draw)
        rotated = service.instantaneous_sir(params, draw.rotated(1.234))
        assert rotated.sir == pytest.approx(original.sir, rel=1e-12)

    @pytest.mark.parametrize("changes", [
        {"h_mag": [-1.0, 1.0]},
        {"theta_prime": [0.0, 7.0]},
        {"g_mag": [1.0]},
        {"h_i_mag": -0.5},
    ])
    def test_rejects_invalid(self, changes):
        with pytest.raises(ContractViolationError):
            self._draw(**changes)

    def test_arrays_are_read_only(self):
        draw = self._draw()
        with pytest.raises(ValueError):
            draw.h_mag[0] = 5.0

    def test_sir_sample_nonnegative(self):
        with pytest.raises(ContractViolationError):
            SirSample(x_value=-1.0, y_value=1.0, sir=1.0)


class TestSampling:
    """Vectorized draws and their moments"""

    def test_sample_channels_shapes(self):
        params = SystemParams(n_elements=16)
        draw = ChannelService().sample_channels(params, stream(1, 0))
        assert draw.n_elements == 16
        assert np.all((draw.theta_prime >= 0) & (draw.theta_prime < 2 * math.pi))

    def test_sample_xy_moments(self):
        params = SystemParams(n_elements=4, sigma_sr=1.2, sigma_ir=0.8)
        x, y = ChannelService().sample_xy(params, stream(2024, 0), 200_000)
        scale = params.cascade_scale
        assert np.mean(x) == pytest.approx(4 * math.pi / 4 * scale, rel=0.01)
        assert np.mean(y ** 2) == pytest.approx(1.0 + 4 * params.interference_cascade_power, rel=0.01)

    def test_same_stream_same_draws(self):
        params = SystemParams(n_elements=4)
        service = ChannelService()
        first = service.sample_xy(params, stream(99, 3), 1000)
        second = service.sample_xy(params, stream(99, 3), 1000)
        assert np.array_equal(first[0], second[0])
        assert np.array_equal(first[1], second[1])

    def test_streams_are_distinct(self):
        assert not np.array_equal(stream(5, 0).random(8), stream(5, 1).random(8))
        assert not np.array_equal(substream(5, 0, 1).random(8), substream(5, 1, 0).random(8))

    def test_derived_seed_is_stable(self):
        assert derive_seed(11, 4, 1) == derive_seed(11, 4, 1)
        assert derive_seed(11, 4, 1) != derive_seed(11, 5, 1)
        assert 0 <= derive_seed(11, 4, 1) < 2 ** 64
