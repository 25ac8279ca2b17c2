"""
Outage Service - Exact, gamma-approximate and asymptotic outage probability
"""
from typing import Optional
import dataclasses
import math

import numpy as np
from scipy import integrate, special

from src.config.constants import (
    OP_ABS_TOLERANCE,
    OP_DEGRADED_BELOW,
    OP_REL_TOLERANCE,
    SLOPE_WINDOW_DB,
    OutageMethod,
)
from src.domain.entities.outage import (
    FLAG_CLAMPED,
    FLAG_DEGRADED_ACCURACY,
    FLAG_SHAPE_ROUNDED,
    DiversityReport,
    ErrorKind,
    OutageEstimate,
)
from src.domain.value_objects.gamma_fit import GammaFit
from src.domain.value_objects.system_params import SystemParams
from src.error_trace.exceptions import ContractViolationError, PrecisionError
from src.application.services.pdf_service import PdfService
from src.numerics.specfun import ln_gamma, log_pcf_d
from src.utilities.logger import get_logger

logger = get_logger(__name__)

# deepest parabolic-cylinder order the closed form evaluates
MIN_PCF_ORDER = -500.0
# rounding excursion outside [0, 1] that is clamped instead of rejected
CLAMP_SLACK = 1e-9


def _threshold_ratio(gamma_th_lin: float, gamma_bar_lin: float) -> float:
    if not (gamma_th_lin >= 0 and gamma_bar_lin > 0):
        raise ContractViolationError(
            "threshold must be nonnegative and average SIR positive",
            details={"gamma_th_lin": gamma_th_lin, "gamma_bar_lin": gamma_bar_lin}
        )
    return gamma_th_lin / gamma_bar_lin


class OutageService:
    """Outage probability P(gamma < gamma_th) by the analytical routes"""

    def __init__(self, pdf_service: Optional[PdfService] = None):
        self.pdf_service = pdf_service or PdfService()

    # ------------------------------------------------------------------
    # Exact
    # ------------------------------------------------------------------

    def op_exact(self, params: SystemParams) -> OutageEstimate:
        """
        P_out = int f_Y(y) F_X(y sqrt(gamma_th / gamma_bar)) dy

        f_Y comes from the Hankel-integral grid, F_X from the cumulative of
        the characteristic-function grid; both are renormalized to unit mass.
        The error descriptor is the trapezoid-Simpson gap.

        Args:
            params: Scenario parameters

        Returns:
            OutageEstimate tagged exact_numeric
        """
        grid_x = self.pdf_service.pdf_x_exact(params)
        grid_y = self.pdf_service.pdf_y_exact(params)

        cdf_x = grid_x.cdf()
        cdf_x = cdf_x / cdf_x[-1]
        mass_y = grid_y.total_mass()

        scale = math.sqrt(params.threshold_ratio)
        y = grid_y.support
        f_y = grid_y.density / mass_y
        integrand = f_y * np.interp(y * scale, grid_x.support, cdf_x, left=0.0, right=1.0)

        trapezoid_value = float(integrate.trapezoid(integrand, y))
        simpson_value = float(integrate.simpson(integrand, x=y))
        err = abs(trapezoid_value - simpson_value)
        value = simpson_value if simpson_value >= 0 else trapezoid_value

        if not math.isfinite(value) or value > 1.0 + 1e-6 or value < -1e-12:
            raise PrecisionError(
                "outage integral failed",
                details={"trapezoid": trapezoid_value, "simpson": simpson_value}
            )
        value = min(max(value, 0.0), 1.0)

        flags = []
        tolerance = max(OP_ABS_TOLERANCE, OP_REL_TOLERANCE * value)
        if value < OP_DEGRADED_BELOW or err > tolerance:
            flags.append(FLAG_DEGRADED_ACCURACY)
            logger.warning(
                f"op_exact below its accuracy contract: value={value:.3e}, err={err:.1e}"
            )

        logger.info(
            f"op_exact: N={params.n_elements}, gamma_th/gamma_bar={params.threshold_ratio:.6g}, p_out={value:.6e}"
        )
        return OutageEstimate(
            value=value,
            method=OutageMethod.EXACT_NUMERIC,
            err=err,
            err_kind=ErrorKind.ABSOLUTE_BOUND,
            flags=flags,
            metadata={"quadrature_error_y": grid_y.metadata.get("quadrature_error", 0.0)},
        )

    # ------------------------------------------------------------------
    # Gamma approximations
    # ------------------------------------------------------------------

    def op_approx_numeric(
        self,
        fit_x: GammaFit,
        fit_y: GammaFit,
        gamma_th_lin: float,
        gamma_bar_lin: float,
    ) -> OutageEstimate:
        """
        int Gamma-pdf(y; k_Y, theta_Y) P(k_X, sqrt(y gamma_th / gamma_bar) / theta_X) dy

        Valid for any (non-integer) shapes. The integral is split at the
        integrand's bulk and evaluated with QUADPACK.

        Args:
            fit_x: Gamma fit of X
            fit_y: Gamma fit of Y^2
            gamma_th_lin: Threshold (linear)
            gamma_bar_lin: Average SIR (linear)

        Returns:
            OutageEstimate tagged gamma_numeric
        """
        ratio = _threshold_ratio(gamma_th_lin, gamma_bar_lin)
        if ratio == 0:
            return OutageEstimate(value=0.0, method=OutageMethod.GAMMA_NUMERIC, err_kind=ErrorKind.ABSOLUTE_BOUND)

        k_x, theta_x = fit_x.shape, fit_x.scale
        k_y, theta_y = fit_y.shape, fit_y.scale
        log_norm = ln_gamma(k_y) + k_y * math.log(theta_y)

        def integrand(y: float) -> float:
            if y <= 0:
                return 0.0
            density = math.exp((k_y - 1.0) * math.log(y) - y / theta_y - log_norm)
            return density * special.gammainc(k_x, math.sqrt(y * ratio) / theta_x)

        bulk = k_y + 0.5 * k_x
        split = theta_y * bulk
        upper = theta_y * (bulk + 40.0 + 10.0 * math.sqrt(bulk))
        value, err = 0.0, 0.0
        for left, right in ((0.0, split), (split, upper)):
            piece, piece_err = integrate.quad(integrand, left, right, epsabs=0.0, epsrel=1e-10, limit=200)
            value += piece
            err += piece_err

        if not math.isfinite(value) or err > 1e-9 + 1e-6 * abs(value):
            raise PrecisionError(
                "gamma outage integral did not converge",
                details={"value": value, "error": err}
            )
        flags = []
        value = self._clamp(value, flags)
        return OutageEstimate(
            value=value,
            method=OutageMethod.GAMMA_NUMERIC,
            err=err,
            err_kind=ErrorKind.ABSOLUTE_BOUND,
            flags=flags,
            metadata={"k_x": k_x, "k_y": k_y},
        )

    def op_approx_closed(
        self,
        fit_x: GammaFit,
        fit_y: GammaFit,
        gamma_th_lin: float,
        gamma_bar_lin: float,
    ) -> OutageEstimate:
        """
        Finite parabolic-cylinder series of the gamma-approximate outage

        P = 1 - sum_{i < k} Gamma(2k_Y + i) / (i! 2^(k_Y + i/2 - 1) Gamma(k_Y))
                c^(i/2) exp(c/8) D_-(2k_Y + i)(sqrt(c/2)),  c = gamma_th theta_Y / (gamma_bar theta_X^2)

        The series needs an integer shape, so k_X is rounded to the nearest
        positive integer and the rounding recorded.

        Args:
            fit_x: Gamma fit of X
            fit_y: Gamma fit of Y^2
            gamma_th_lin: Threshold (linear)
            gamma_bar_lin: Average SIR (linear)

        Returns:
            OutageEstimate tagged gamma_closed
        """
        ratio = _threshold_ratio(gamma_th_lin, gamma_bar_lin)
        k_y = fit_y.shape
        k_hat = max(1, int(round(fit_x.shape)))
        deepest = -(2.0 * k_y + k_hat - 1)
        if deepest < MIN_PCF_ORDER:
            raise PrecisionError(
                "parabolic cylinder order too deep for the closed form; use gamma-numeric",
                details={"order": deepest, "k_hat": k_hat}
            )

        c = ratio * fit_y.scale / fit_x.scale ** 2
        z = math.sqrt(0.5 * c)
        log_c = math.log(c) if c > 0 else -math.inf
        base = -ln_gamma(k_y) + 0.125 * c

        total, magnitude = 0.0, 0.0
        for i in range(k_hat):
            if i > 0 and c == 0:
                break
            order = 2.0 * k_y + i
            log_term = (
                base
                + ln_gamma(order)
                - ln_gamma(i + 1.0)
                - (k_y + 0.5 * i - 1.0) * math.log(2.0)
                + (0.5 * i * log_c if i > 0 else 0.0)
                + log_pcf_d(-order, z)
            )
            term = math.exp(log_term)
            total += term
            magnitude += abs(term)

        value = 1.0 - total
        err = 4.0 * np.finfo(float).eps * (1.0 + magnitude) * (k_hat + 1)
        flags = []
        metadata = {"k_x": fit_x.shape, "k_hat": k_hat, "k_y": k_y}
        if k_hat != fit_x.shape:
            flags.append(FLAG_SHAPE_ROUNDED)
            metadata["shape_rounding"] = k_hat - fit_x.shape
        value = self._clamp(value, flags)
        return OutageEstimate(
            value=value,
            method=OutageMethod.GAMMA_CLOSED,
            err=err,
            err_kind=ErrorKind.ABSOLUTE_BOUND,
            flags=flags,
            metadata=metadata,
        )

    def op_asymptotic(
        self,
        fit_x: GammaFit,
        fit_y: GammaFit,
        gamma_th_lin: float,
        gamma_bar_lin: float,
    ) -> OutageEstimate:
        """
        High-SIR outage Gamma(k_Y + k_X/2) / (Gamma(k_X + 1) Gamma(k_Y)) c^(k_X/2)

        c = gamma_th theta_Y / (gamma_bar theta_X^2) is the composite of the
        closed-form series. Uses the unrounded k_X. Values above one (low SIR)
        are clamped.
        """
        ratio = _threshold_ratio(gamma_th_lin, gamma_bar_lin)
        k_x, k_y = fit_x.shape, fit_y.shape
        if ratio == 0:
            return OutageEstimate(value=0.0, method=OutageMethod.ASYMPTOTIC, err_kind=ErrorKind.MODEL)

        log_value = self._log_asymptotic_prefactor(fit_x, fit_y) + 0.5 * k_x * math.log(
            ratio * fit_y.scale / fit_x.scale ** 2
        )
        flags = []
        metadata = {"log_value": log_value}
        if log_value > 0:
            flags.append(FLAG_CLAMPED)
            logger.warning(f"asymptotic outage {math.exp(min(log_value, 700.0)):.3e} exceeds one; clamped")
        value = math.exp(min(log_value, 0.0))
        return OutageEstimate(
            value=value,
            method=OutageMethod.ASYMPTOTIC,
            err_kind=ErrorKind.MODEL,
            flags=flags,
            metadata=metadata,
        )

    @staticmethod
    def _log_asymptotic_prefactor(fit_x: GammaFit, fit_y: GammaFit) -> float:
        k_x, k_y = fit_x.shape, fit_y.shape
        return ln_gamma(k_y + 0.5 * k_x) - ln_gamma(k_x + 1.0) - ln_gamma(k_y)

    # ------------------------------------------------------------------
    # Diversity
    # ------------------------------------------------------------------

    def diversity_and_coding(self, fit_x: GammaFit, fit_y: GammaFit) -> DiversityReport:
        """
        Diversity order k_X/2 and coding gain A^(-2/k_X) theta_X^2 / theta_Y

        A is the asymptotic prefactor, so (G_c gamma_bar / gamma_th)^(-G_d)
        reproduces op_asymptotic.
        """
        k_x = fit_x.shape
        gain_factor = math.exp(-2.0 / k_x * self._log_asymptotic_prefactor(fit_x, fit_y))
        return DiversityReport(
            diversity_order=0.5 * k_x,
            coding_gain=gain_factor * fit_x.scale ** 2 / fit_y.scale,
            printed_diversity_order=0.25 * k_x,
            printed_coding_gain=gain_factor * fit_y.scale / fit_x.scale ** 2,
        )

    def empirical_diversity_slope(self, params: SystemParams, window_db=SLOPE_WINDOW_DB) -> float:
        """
        Slope of log10 op_approx_numeric against log10 gamma_bar over a window

        Args:
            params: Scenario parameters (the INR and threshold are kept)
            window_db: Average SIR endpoints in dB

        Returns:
            d log10 P / d log10 gamma_bar
        """
        fit_x = self.pdf_service.gamma_fit_x(params)
        fit_y = self.pdf_service.gamma_fit_y2(params)
        low_db, high_db = window_db
        values = []
        for gamma_bar_db in (low_db, high_db):
            point = params.with_updates(snr_db=params.inr_db + gamma_bar_db)
            estimate = self.op_approx_numeric(fit_x, fit_y, point.gamma_th_lin, point.gamma_bar_lin)
            if estimate.value <= 0:
                raise PrecisionError(
                    "outage underflows inside the slope window",
                    details={"gamma_bar_db": gamma_bar_db}
                )
            values.append(math.log10(estimate.value))
        return (values[1] - values[0]) / ((high_db - low_db) / 10.0)

    def diversity_report(self, params: SystemParams, with_slope: bool = True) -> DiversityReport:
        """Diversity report of a scenario, optionally with the empirical slope"""
        fit_x = self.pdf_service.gamma_fit_x(params)
        fit_y = self.pdf_service.gamma_fit_y2(params)
        report = self.diversity_and_coding(fit_x, fit_y)
        if not with_slope:
            return report
        return dataclasses.replace(report, empirical_slope=self.empirical_diversity_slope(params))

    # ------------------------------------------------------------------
    # Scenario-level helpers
    # ------------------------------------------------------------------

    def gamma_estimate(self, params: SystemParams, method: OutageMethod) -> OutageEstimate:
        """Run a gamma-fit route for a scenario"""
        fit_x = self.pdf_service.gamma_fit_x(params)
        fit_y = self.pdf_service.gamma_fit_y2(params)
        routes = {
            OutageMethod.GAMMA_CLOSED: self.op_approx_closed,
            OutageMethod.GAMMA_NUMERIC: self.op_approx_numeric,
            OutageMethod.ASYMPTOTIC: self.op_asymptotic,
        }
        if method not in routes:
            raise ContractViolationError(f"{method} is not a gamma-fit route")
        return routes[method](fit_x, fit_y, params.threshold_ratio, 1.0)

    @staticmethod
    def _clamp(value: float, flags: list) -> float:
        if 0.0 <= value <= 1.0:
            return value
        excursion = -value if value < 0 else value - 1.0
        if excursion > CLAMP_SLACK:
            raise PrecisionError(
                "outage probability left [0, 1] beyond rounding",
                details={"value": value}
            )
        flags.append(FLAG_CLAMPED)
        logger.warning(f"clamped outage probability {value:.3e} into [0, 1]")
        return min(max(value, 0.0), 1.0)
