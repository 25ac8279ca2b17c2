"""
Channel Service - Fading draws, RIS phase alignment and instantaneous SIR
"""
from typing import Tuple
import math

import numpy as np

from src.domain.value_objects.channel import TWO_PI, ChannelDraw, SirSample
from src.domain.value_objects.system_params import SystemParams
from src.error_trace.exceptions import ContractViolationError
from src.utilities.logger import get_logger

logger = get_logger(__name__)

SQRT_HALF = math.sqrt(0.5)


class ChannelService:
    """Samples the desired and interfering links of one RIS-assisted D2D scenario

    Magnitudes are Rayleigh with E[|.|^2] = sigma^2 (scale sigma/sqrt(2)).
    The RIS phases cancel the desired cascade, so X adds coherently while the
    reflected interference keeps the uniform residual phases theta'.
    """

    def sample_channels(self, params: SystemParams, rng: np.random.Generator) -> ChannelDraw:
        """
        Draw one realization of every channel

        Args:
            params: Scenario parameters
            rng: Seeded generator (see numerics.streams)

        Returns:
            ChannelDraw
        """
        n = params.n_elements
        h_mag = rng.rayleigh(scale=params.sigma_sr * SQRT_HALF, size=n)
        g_mag = rng.rayleigh(scale=params.sigma_rd * SQRT_HALF, size=n)
        alpha_mag = rng.rayleigh(scale=params.sigma_ir * SQRT_HALF, size=n)
        beta_mag = rng.rayleigh(scale=params.sigma_rd * SQRT_HALF, size=n)
        theta_prime = rng.uniform(0.0, TWO_PI, size=n)
        h_i_mag = rng.rayleigh(scale=params.sigma_id * SQRT_HALF)
        h_i_phase = rng.uniform(0.0, TWO_PI)

        return ChannelDraw(
            h_mag=h_mag,
            g_mag=g_mag,
            alpha_mag=alpha_mag,
            beta_mag=beta_mag,
            theta_prime=theta_prime,
            h_i_mag=h_i_mag,
            h_i_phase=h_i_phase,
        )

    def instantaneous_sir(self, params: SystemParams, draw: ChannelDraw) -> SirSample:
        """
        Interference-limited SIR of one draw

        Args:
            params: Scenario parameters
            draw: Channel realization with params.n_elements entries

        Returns:
            SirSample with X, Y and gamma = gamma_bar X^2 / Y^2
        """
        if draw.n_elements != params.n_elements:
            raise ContractViolationError(
                "draw dimension does not match n_elements",
                details={"draw": draw.n_elements, "n_elements": params.n_elements}
            )

        x_value = float(np.dot(draw.g_mag, draw.h_mag))
        reflected = np.sum(draw.beta_mag * draw.alpha_mag * np.exp(1j * draw.theta_prime))
        y_value = float(abs(reflected + draw.h_i_mag * np.exp(1j * draw.h_i_phase)))

        if y_value == 0.0:
            sir = math.inf if x_value > 0 else 0.0
        else:
            sir = params.gamma_bar_lin * x_value ** 2 / y_value ** 2
        return SirSample(x_value=x_value, y_value=y_value, sir=sir)

    def sample_xy(self, params: SystemParams, rng: np.random.Generator, size: int) -> Tuple[np.ndarray, np.ndarray]:
        """
        Vectorized draw of `size` independent (X, Y) pairs

        The draw order per batch matches sample_channels: h, g, alpha, beta,
        theta', |h_I|, phase of h_I.

        Args:
            params: Scenario parameters
            rng: Seeded generator
            size: Number of realizations

        Returns:
            (X samples, Y samples)
        """
        shape = (size, params.n_elements)
        h_mag = rng.rayleigh(scale=params.sigma_sr * SQRT_HALF, size=shape)
        g_mag = rng.rayleigh(scale=params.sigma_rd * SQRT_HALF, size=shape)
        alpha_mag = rng.rayleigh(scale=params.sigma_ir * SQRT_HALF, size=shape)
        beta_mag = rng.rayleigh(scale=params.sigma_rd * SQRT_HALF, size=shape)
        theta_prime = rng.uniform(0.0, TWO_PI, size=shape)
        h_i_mag = rng.rayleigh(scale=params.sigma_id * SQRT_HALF, size=size)
        h_i_phase = rng.uniform(0.0, TWO_PI, size=size)

        x = np.einsum("ij,ij->i", g_mag, h_mag)
        reflected = np.sum(beta_mag * alpha_mag * np.exp(1j * theta_prime), axis=1)
        y = np.abs(reflected + h_i_mag * np.exp(1j * h_i_phase))
        return x, y
