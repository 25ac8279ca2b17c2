"""
PDF Service - Gamma fits and exact densities of X and Y
"""
from typing import Optional, Tuple
import math

import numpy as np
from scipy import integrate, special, stats

from src.config.constants import (
    NORMALIZATION_TOLERANCE,
    SERIES_POLE_EPSILON,
    SERIES_POLE_MISMATCH,
    TAIL_MASS_GUARD,
    X_GRID_EXTENT_SD,
    X_GRID_POINTS,
    Y_GRID_EXTENT_SD,
    Y_GRID_POINTS,
    PdfMethod,
)
from src.domain.entities.pdf_grid import PdfGrid
from src.domain.value_objects.gamma_fit import GammaFit
from src.domain.value_objects.grid_spec import GridSpec
from src.domain.value_objects.precision import DEFAULT_PRECISION, PrecisionPolicy
from src.domain.value_objects.system_params import SystemParams
from src.error_trace.exceptions import (
    ConsistencyError,
    ContractViolationError,
    GridError,
    PrecisionError,
    SeriesInstabilityError,
)
from src.infrastructure.cache import CACHE_PDF_X, CACHE_PDF_Y, InMemoryCacheManager, get_cache
from src.numerics import fourier, quadrature
from src.numerics.specfun import hyp_1f2, ln_gamma_with_sign, log_kummer_1f1
from src.utilities.logger import get_logger

logger = get_logger(__name__)

DEFAULT_X_GRID = GridSpec(n_points=X_GRID_POINTS, extent_sd=X_GRID_EXTENT_SD)
DEFAULT_Y_GRID = GridSpec(n_points=Y_GRID_POINTS, extent_sd=Y_GRID_EXTENT_SD)
# cancellation the explicit series tolerates before giving up
SERIES_CANCELLATION_LIMIT = 1e10


def double_rayleigh_pdf(h: np.ndarray, scale: float) -> np.ndarray:
    """
    Density of the product of two Rayleigh magnitudes with E[m^2] = sigma^2

    f(h) = 4h / s^2 * K0(2h / s), s = sigma_1 * sigma_2, and f(0) = 0.

    Args:
        h: Evaluation points (>= 0)
        scale: s = sigma_1 * sigma_2

    Returns:
        Density values
    """
    h = np.asarray(h, dtype=float)
    out = np.zeros_like(h)
    positive = h > 0
    hp = h[positive]
    out[positive] = 4.0 * hp / scale ** 2 * special.k0(2.0 * hp / scale)
    return out


class PdfService:
    """Moment-matched gamma fits and numerically exact densities of X and Y"""

    def __init__(self, precision: PrecisionPolicy = DEFAULT_PRECISION, cache: Optional[InMemoryCacheManager] = None):
        self.precision = precision
        self.cache = cache if cache is not None else get_cache()

    # ------------------------------------------------------------------
    # Moments and gamma fits
    # ------------------------------------------------------------------

    @staticmethod
    def moments_x(params: SystemParams) -> Tuple[float, float]:
        """E[X] = N pi/4 s and Var[X] = N (1 - pi^2/16) s^2 with s = sigma_sr sigma_rd"""
        scale = params.cascade_scale
        mean = params.n_elements * math.pi / 4.0 * scale
        variance = params.n_elements * (1.0 - math.pi ** 2 / 16.0) * scale ** 2
        return mean, variance

    @staticmethod
    def mean_y2(params: SystemParams) -> float:
        """E[Y^2] = sigma_id^2 + N sigma_ir^2 sigma_rd^2"""
        return params.direct_interference_power + params.n_elements * params.interference_cascade_power

    @staticmethod
    def second_moment_y2(params: SystemParams) -> float:
        """
        E[Y^4] of the interference envelope

        With a = sigma_ir^2 sigma_rd^2 and d = sigma_id^2:
        4 N a^2 + 2 N (N - 1) a^2 + 2 d^2 + 4 N a d.
        """
        n = params.n_elements
        a = params.interference_cascade_power
        d = params.direct_interference_power
        return 4 * n * a ** 2 + 2 * n * (n - 1) * a ** 2 + 2 * d ** 2 + 4 * n * a * d

    @staticmethod
    def printed_second_moment_y2(params: SystemParams) -> float:
        """
        The published mixed-power form of E[Y^4]

        4 N a^2 + 2 N (N - 1) a + 2 d + 4 N a d. It agrees with the
        corrected moment only when a = d = 1 and is kept as a negative control.
        """
        n = params.n_elements
        a = params.interference_cascade_power
        d = params.direct_interference_power
        return 4 * n * a ** 2 + 2 * n * (n - 1) * a + 2 * d + 4 * n * a * d

    def gamma_fit_x(self, params: SystemParams) -> GammaFit:
        """
        Gamma fit of X: k_X = N pi^2 / (16 - pi^2), theta_X = Var[X] / E[X]

        Args:
            params: Scenario parameters

        Returns:
            GammaFit (k_X, theta_X)
        """
        mean, variance = self.moments_x(params)
        return GammaFit.from_moments(mean, variance)

    def gamma_fit_y2(self, params: SystemParams) -> GammaFit:
        """
        Gamma fit of Y' = Y^2 from its first two moments

        Args:
            params: Scenario parameters

        Returns:
            GammaFit (k_Y, theta_Y)
        """
        mean = self.mean_y2(params)
        variance = self.second_moment_y2(params) - mean ** 2
        if not variance > 0:
            raise ConsistencyError(
                "variance of Y^2 must be positive",
                details={"mean": mean, "variance": variance, "n_elements": params.n_elements}
            )
        return GammaFit.from_moments(mean, variance)

    # ------------------------------------------------------------------
    # Density of X
    # ------------------------------------------------------------------

    def pdf_x_exact(self, params: SystemParams, grid_spec: Optional[GridSpec] = None) -> PdfGrid:
        """
        Density of X = sum of N i.i.d. double-Rayleigh terms

        The single-term density is put on a lattice, its discrete
        characteristic function raised to the N-th power and inverted.

        Args:
            params: Scenario parameters
            grid_spec: Lattice size and extent (defaults to 2^16 points on
                [0, E[X] + 12 sd])

        Returns:
            PdfGrid tagged cf_fft
        """
        grid_spec = grid_spec or DEFAULT_X_GRID
        key = (params.n_elements, params.cascade_scale, grid_spec)
        return self.cache.get_or_compute(key, lambda: self._pdf_x_exact(params, grid_spec), prefix=CACHE_PDF_X)

    def _pdf_x_exact(self, params: SystemParams, grid_spec: GridSpec) -> PdfGrid:
        mean, variance = self.moments_x(params)
        upper = grid_spec.upper or mean + grid_spec.extent_sd * math.sqrt(variance)

        fit = self.gamma_fit_x(params)
        tail = float(stats.gamma.sf(upper, fit.shape, scale=fit.scale))
        if tail > TAIL_MASS_GUARD:
            suggested = float(stats.gamma.isf(TAIL_MASS_GUARD / 10.0, fit.shape, scale=fit.scale))
            raise GridError(
                "density grid of X leaves too much mass beyond its upper end",
                tail_mass=tail,
                suggested_upper=suggested,
            )

        n_points = grid_spec.n_points
        dx = upper / (n_points - 1)
        logger.debug(f"pdf_x_exact: N={params.n_elements}, upper={upper:.6g}, points={n_points}")

        scale = params.cascade_scale
        single = fourier.lattice_masses(lambda h: double_rayleigh_pdf(h, scale), dx, n_points)
        masses = fourier.n_fold_convolution(single, params.n_elements)
        grid = PdfGrid(
            support=dx * np.arange(n_points),
            density=masses / dx,
            method=PdfMethod.CF_FFT,
            metadata={"tail_mass_bound": tail, "n_elements": params.n_elements},
        )
        self._check_normalization(grid, "X")
        return grid

    # ------------------------------------------------------------------
    # Density of Y
    # ------------------------------------------------------------------

    @staticmethod
    def _hankel_kernel(params: SystemParams):
        n = params.n_elements
        a = params.interference_cascade_power
        d = params.direct_interference_power

        def kernel(rho: np.ndarray) -> np.ndarray:
            rho2 = rho * rho
            return np.exp(n * np.log(4.0 / (4.0 + a * rho2)) - 0.25 * d * rho2)

        def log_envelope(rho: float) -> float:
            return math.log(rho) + n * math.log(4.0 / (4.0 + a * rho * rho)) - 0.25 * d * rho * rho

        start = 1.0 / math.sqrt(0.5 * (n * a + d))
        return kernel, log_envelope, start

    def pdf_y_at(self, params: SystemParams, y: float) -> float:
        """
        f_Y(y) = y * int_0^inf rho J0(y rho) (4 / (4 + a rho^2))^N exp(-d rho^2 / 4) d rho

        Args:
            params: Scenario parameters
            y: Envelope value (>= 0)

        Returns:
            Density at y
        """
        if y < 0:
            raise ContractViolationError("y must be nonnegative", details={"y": y})
        if y == 0:
            return 0.0
        kernel, log_envelope, start = self._hankel_kernel(params)
        cutoff = quadrature.envelope_cutoff(log_envelope, start)
        value, _ = quadrature.hankel_j0_integral(kernel, y, cutoff)
        return max(0.0, y * value)

    def pdf_y_exact(self, params: SystemParams, grid_spec: Optional[GridSpec] = None) -> PdfGrid:
        """
        Density of the interference envelope Y on a uniform grid

        Args:
            params: Scenario parameters
            grid_spec: Grid size and extent (defaults to 512 points on
                [0, sqrt(E[Y^2] + 16 sd(Y^2))])

        Returns:
            PdfGrid tagged hankel
        """
        grid_spec = grid_spec or DEFAULT_Y_GRID
        key = (
            params.n_elements,
            params.interference_cascade_power,
            params.direct_interference_power,
            grid_spec,
        )
        return self.cache.get_or_compute(key, lambda: self._pdf_y_exact(params, grid_spec), prefix=CACHE_PDF_Y)

    def _pdf_y_exact(self, params: SystemParams, grid_spec: GridSpec) -> PdfGrid:
        mean = self.mean_y2(params)
        sd = math.sqrt(self.second_moment_y2(params) - mean ** 2)
        upper = grid_spec.upper or math.sqrt(mean + grid_spec.extent_sd * sd)
        support = np.linspace(0.0, upper, grid_spec.n_points)
        logger.debug(f"pdf_y_exact: N={params.n_elements}, upper={upper:.6g}, points={grid_spec.n_points}")

        kernel, log_envelope, start = self._hankel_kernel(params)
        cutoff = quadrature.envelope_cutoff(log_envelope, start)
        density = np.zeros_like(support)
        worst = 0.0
        for i, y in enumerate(support[1:], start=1):
            value, err = quadrature.hankel_j0_integral(kernel, float(y), cutoff)
            density[i] = max(0.0, y * value)
            worst = max(worst, y * err)

        grid = PdfGrid(
            support=support,
            density=density,
            method=PdfMethod.HANKEL,
            metadata={"quadrature_error": worst, "rho_cutoff": cutoff, "n_elements": params.n_elements},
        )
        self._check_normalization(grid, "Y")
        return grid

    def pdf_y_mixture(self, params: SystemParams, y: float) -> float:
        """
        f_Y(y) as a gamma mixture of Rayleigh densities

        Given the reflected amplitudes, Y^2 is exponential with mean W + d,
        W ~ Gamma(N, a); f_Y(y) = E_W[2y / (W + d) exp(-y^2 / (W + d))].

        Args:
            params: Scenario parameters
            y: Envelope value (>= 0)

        Returns:
            Density at y
        """
        if y < 0:
            raise ContractViolationError("y must be nonnegative", details={"y": y})
        if y == 0:
            return 0.0
        n = params.n_elements
        a = params.interference_cascade_power
        d = params.direct_interference_power

        def integrand(w: float) -> float:
            spread = w + d
            return stats.gamma.pdf(w, n, scale=a) * 2.0 * y / spread * math.exp(-y * y / spread)

        mode = max(0.0, (n - 1) * a)
        upper = float(stats.gamma.isf(1e-16, n, scale=a))
        pieces = [0.0, mode, upper] if 0.0 < mode < upper else [0.0, upper]
        total = 0.0
        for left, right in zip(pieces[:-1], pieces[1:]):
            value, _ = integrate.quad(integrand, left, right, epsabs=0.0, epsrel=1e-11, limit=200)
            total += value
        return total

    def pdf_y_series(self, params: SystemParams, y: float, m_max: int = 200) -> float:
        """
        Explicit series for f_Y, used as a cross-check of pdf_y_exact

        f_Y(y) = 2y a^-N sum_m (-y^2)^m / m! d^(N-m-1) U(N, N-m, d/a), with the
        Tricomi U written through two Kummer functions. At integer N those
        carry gamma poles, so the series is evaluated at N + eps and N - eps
        and averaged.

        Args:
            params: Scenario parameters
            y: Envelope value (> 0)
            m_max: Maximum number of series terms

        Returns:
            Density at y
        """
        if not y > 0:
            raise ContractViolationError("the explicit series needs y > 0", details={"y": y})
        upper = self._series_at_order(params, y, params.n_elements + SERIES_POLE_EPSILON, m_max)
        lower = self._series_at_order(params, y, params.n_elements - SERIES_POLE_EPSILON, m_max)
        scale = max(abs(upper), abs(lower))
        if scale == 0 or abs(upper - lower) > SERIES_POLE_MISMATCH * scale:
            raise SeriesInstabilityError(
                "pole regularization of the explicit series did not settle",
                details={"y": y, "upper": upper, "lower": lower, "n_elements": params.n_elements}
            )
        return 0.5 * (upper + lower)

    def _log_tricomi_u(self, order: float, b: float, z: float) -> Tuple[float, float]:
        """log|U(order, b, z)| and sign via the two-term Kummer combination"""
        parts = []
        log_g1, s_g1 = ln_gamma_with_sign(1.0 - b)
        log_g2, s_g2 = ln_gamma_with_sign(order - b + 1.0)
        log_m, s_m = log_kummer_1f1(order, b, z, self.precision)
        parts.append((log_g1 - log_g2 + log_m, s_g1 * s_g2 * s_m))

        log_g3, s_g3 = ln_gamma_with_sign(b - 1.0)
        log_g4, s_g4 = ln_gamma_with_sign(order)
        log_m2, s_m2 = log_kummer_1f1(order - b + 1.0, 2.0 - b, z, self.precision)
        parts.append((log_g3 - log_g4 + (1.0 - b) * math.log(z) + log_m2, s_g3 * s_g4 * s_m2))

        top = max(p[0] for p in parts)
        total = sum(sign * math.exp(log_value - top) for log_value, sign in parts)
        if total == 0:
            return -math.inf, 1.0
        return top + math.log(abs(total)), 1.0 if total > 0 else -1.0

    def _series_at_order(self, params: SystemParams, y: float, order: float, m_max: int) -> float:
        a = params.interference_cascade_power
        d = params.direct_interference_power
        z = d / a
        log_y2 = 2.0 * math.log(y)

        log_terms, signs = [], []
        for m in range(m_max):
            try:
                log_u, sign_u = self._log_tricomi_u(order, order - m, z)
            except PrecisionError as exc:
                raise SeriesInstabilityError(
                    "Kummer function inside the explicit series failed",
                    details={"m": m, "y": y, **exc.details}
                ) from exc
            log_term = m * log_y2 - math.lgamma(m + 1) + (order - m - 1.0) * math.log(d) + log_u
            log_terms.append(log_term)
            signs.append(sign_u * (-1.0) ** m)
            if m > y * y / d + 5 and log_term < max(log_terms) + math.log(1e-17):
                break
        else:
            raise SeriesInstabilityError(
                "explicit series did not converge within m_max terms",
                details={"m_max": m_max, "y": y}
            )

        log_terms = np.asarray(log_terms)
        top = float(np.max(log_terms))
        total = float(np.sum(np.asarray(signs) * np.exp(log_terms - top)))
        if total == 0 or -math.log(abs(total)) > math.log(SERIES_CANCELLATION_LIMIT):
            raise SeriesInstabilityError(
                "explicit series lost its accuracy to cancellation",
                details={"y": y, "order": order}
            )
        return 2.0 * y * math.exp(top - order * math.log(a)) * total

    def printed_pdf_y_series(self, params: SystemParams, y: float, m_max: int = 60) -> float:
        """
        The published 1F2 double series for f_Y, evaluated literally

        Kept as a negative control next to pdf_y_series; it carries the same
        N +/- eps pole regularization.
        """
        if not y > 0:
            raise ContractViolationError("the explicit series needs y > 0", details={"y": y})
        values = [
            self._printed_series_at_order(params, y, params.n_elements + eps, m_max)
            for eps in (SERIES_POLE_EPSILON, -SERIES_POLE_EPSILON)
        ]
        scale = max(abs(v) for v in values) if all(math.isfinite(v) for v in values) else math.inf
        if scale == 0 or not math.isfinite(scale) or abs(values[0] - values[1]) > SERIES_POLE_MISMATCH * scale:
            raise SeriesInstabilityError(
                "pole regularization of the printed series did not settle",
                details={"y": y, "values": values}
            )
        return 0.5 * (values[0] + values[1])

    def _printed_series_at_order(self, params: SystemParams, y: float, order: float, m_max: int) -> float:
        a = params.interference_cascade_power
        d = params.direct_interference_power
        argument = y * y / a
        total = 0.0
        for m in range(m_max):
            try:
                first = (
                    y ** (-2 * m)
                    * math.exp(math.lgamma(m - order - 1.0) - math.lgamma(order - m) - math.lgamma(m + 1.0))
                    * special.gammasgn(m - order - 1.0) * special.gammasgn(order - m)
                    * hyp_1f2(order, order - m, order - m, argument, self.precision)
                )
                second = (
                    a ** (order - m - 1.0)
                    * math.exp(math.lgamma(order - m - 1.0) - math.lgamma(order))
                    * special.gammasgn(order - m - 1.0)
                    * hyp_1f2(m + 1.0, m - order + 2.0, 1.0, argument, self.precision)
                )
            except (PrecisionError, OverflowError) as exc:
                raise SeriesInstabilityError("printed series overflowed", details={"m": m, "y": y}) from exc
            total += 2.0 * y * d ** m * a ** order * (first + second)
        return total

    # ------------------------------------------------------------------
    # Gamma-fit densities
    # ------------------------------------------------------------------

    def gamma_pdf_x(self, params: SystemParams, support: np.ndarray) -> PdfGrid:
        """Gamma-fit density of X on a given support (the origin carries density 0)"""
        fit = self.gamma_fit_x(params)
        support = np.asarray(support, dtype=float)
        density = np.zeros_like(support)
        positive = support > 0
        density[positive] = stats.gamma.pdf(support[positive], fit.shape, scale=fit.scale)
        return PdfGrid(support=support, density=density, method=PdfMethod.GAMMA_FIT, metadata=fit.to_dict())

    def gamma_pdf_y(self, params: SystemParams, support: np.ndarray) -> PdfGrid:
        """Density of Y implied by the gamma fit of Y^2: f_Y(y) = 2y f_Y'(y^2)"""
        fit = self.gamma_fit_y2(params)
        support = np.asarray(support, dtype=float)
        density = np.zeros_like(support)
        positive = support > 0
        y = support[positive]
        density[positive] = 2.0 * y * stats.gamma.pdf(y ** 2, fit.shape, scale=fit.scale)
        return PdfGrid(support=support, density=density, method=PdfMethod.GAMMA_FIT, metadata=fit.to_dict())

    @staticmethod
    def _check_normalization(grid: PdfGrid, variable: str) -> None:
        mass = grid.total_mass()
        if abs(mass - 1.0) > NORMALIZATION_TOLERANCE:
            raise PrecisionError(
                f"density of {variable} does not integrate to one",
                details={"mass": mass, "method": grid.method.value}
            )
        logger.debug(f"density of {variable} integrates to {mass:.8f}")
