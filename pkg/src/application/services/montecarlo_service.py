"""
Monte Carlo Service - Simulated outage, histograms and moment oracles
"""
from typing import List, Optional, Tuple
import math

import numpy as np
from scipy import stats

from src.config.constants import ChannelVariable, MomentExpression, OutageMethod, PdfMethod
from src.config.settings import get_settings
from src.domain.entities.moment import MomentEstimate
from src.domain.entities.outage import FLAG_WIDE_CI, ErrorKind, OutageEstimate
from src.domain.entities.pdf_grid import PdfGrid
from src.domain.value_objects.mc_config import McConfig
from src.domain.value_objects.system_params import SystemParams
from src.error_trace.exceptions import ContractViolationError
from src.application.services.channel_service import ChannelService
from src.numerics.streams import stream, substream
from src.utilities.helpers import chunk_sizes, ordered_map
from src.utilities.logger import get_logger

logger = get_logger(__name__)

MIN_BINS = 20
HISTOGRAM_COVERAGE = 0.9999
BOOTSTRAP_RESAMPLES = 200
# below this many chunks the bootstrap resamples individual draws
MIN_BOOTSTRAP_BLOCKS = 20
# spawn-key root of the bootstrap generator, disjoint from the chunk streams
BOOTSTRAP_STREAM = 2 ** 32 - 1


def wilson_interval(events: int, trials: int, confidence: float) -> Tuple[float, float]:
    """
    Wilson score interval of a binomial proportion

    Args:
        events: Number of successes
        trials: Number of trials (> 0)
        confidence: Two-sided confidence level

    Returns:
        (lower, upper)
    """
    z = float(stats.norm.ppf(0.5 + 0.5 * confidence))
    p_hat = events / trials
    z2n = z * z / trials
    denominator = 1.0 + z2n
    center = (p_hat + 0.5 * z2n) / denominator
    half = z * math.sqrt(p_hat * (1.0 - p_hat) / trials + 0.25 * z2n / trials) / denominator
    return max(0.0, center - half), min(1.0, center + half)


class MonteCarloService:
    """Chunked simulation of the SIR with one counter-based stream per chunk

    The sample set depends only on (seed, n_samples, chunk_size); workers
    only change how fast the chunks are drawn.
    """

    def __init__(
        self,
        channel_service: Optional[ChannelService] = None,
        workers: Optional[int] = None,
        chunk_size: Optional[int] = None,
    ):
        settings = get_settings()
        self.channel_service = channel_service or ChannelService()
        self.workers = workers or settings.workers
        self.chunk_size = chunk_size or settings.mc_chunk_size

    def _chunks(self, cfg: McConfig) -> List[Tuple[int, int]]:
        return list(enumerate(chunk_sizes(cfg.n_samples, self.chunk_size)))

    def _draw(self, params: SystemParams, seed: int, chunk: Tuple[int, int]) -> Tuple[np.ndarray, np.ndarray]:
        index, size = chunk
        return self.channel_service.sample_xy(params, stream(seed, index), size)

    def sample_variable(self, variable: ChannelVariable, params: SystemParams, cfg: McConfig) -> List[np.ndarray]:
        """Per-chunk samples of X or Y, in chunk order"""
        variable = ChannelVariable(variable)
        column = 0 if variable == ChannelVariable.X else 1
        return ordered_map(
            lambda chunk: self._draw(params, cfg.seed, chunk)[column],
            self._chunks(cfg),
            self.workers,
        )

    def estimate_op_mc(self, params: SystemParams, cfg: McConfig) -> OutageEstimate:
        """
        Fraction of simulated SIRs below the threshold

        A draw is an outage when X^2 < (gamma_th / gamma_bar) Y^2. The error
        descriptor is the Wilson half-width at cfg.confidence.

        Args:
            params: Scenario parameters
            cfg: Sample budget, seed and confidence

        Returns:
            OutageEstimate tagged monte_carlo
        """
        ratio = params.threshold_ratio
        logger.info(
            f"estimate_op_mc: N={params.n_elements}, gamma_th/gamma_bar={ratio:.6g}, "
            f"samples={cfg.n_samples}, seed={cfg.seed}, workers={self.workers}"
        )

        def count(chunk: Tuple[int, int]) -> int:
            x, y = self._draw(params, cfg.seed, chunk)
            return int(np.count_nonzero(x * x < ratio * (y * y)))

        events = sum(ordered_map(count, self._chunks(cfg), self.workers))
        ci_low, ci_high = wilson_interval(events, cfg.n_samples, cfg.confidence)

        flags = []
        if cfg.target_op is not None:
            too_few = cfg.n_samples < 10.0 / cfg.target_op
        else:
            too_few = events == 0
        if too_few:
            flags.append(FLAG_WIDE_CI)
            logger.warning(
                f"Monte Carlo budget too small for the outage level: events={events}, samples={cfg.n_samples}"
            )

        return OutageEstimate(
            value=events / cfg.n_samples,
            method=OutageMethod.MONTE_CARLO,
            err=0.5 * (ci_high - ci_low),
            err_kind=ErrorKind.CI_HALF_WIDTH,
            flags=flags,
            ci_low=ci_low,
            ci_high=ci_high,
            metadata={"events": events, "n_samples": cfg.n_samples, "seed": cfg.seed, "confidence": cfg.confidence},
        )

    def empirical_pdf(
        self,
        variable: ChannelVariable,
        params: SystemParams,
        cfg: McConfig,
        bins: int = 200,
    ) -> PdfGrid:
        """
        Normalized histogram of X or Y

        The support is [0, q], q the 99.99% sample quantile; the histogram is
        normalized over the samples inside it.

        Args:
            variable: X or Y
            params: Scenario parameters
            cfg: Sample budget and seed
            bins: Number of bins (>= 20)

        Returns:
            PdfGrid tagged histogram, with bin edges
        """
        if bins < MIN_BINS:
            raise ContractViolationError(f"bins must be at least {MIN_BINS}", details={"bins": bins})
        samples = np.concatenate(self.sample_variable(variable, params, cfg))
        upper = float(np.quantile(samples, HISTOGRAM_COVERAGE))
        density, edges = np.histogram(samples, bins=bins, range=(0.0, upper), density=True)
        logger.debug(f"empirical_pdf: {ChannelVariable(variable).value}, upper={upper:.6g}, bins={bins}")
        return PdfGrid(
            support=0.5 * (edges[:-1] + edges[1:]),
            density=density,
            method=PdfMethod.HISTOGRAM,
            bin_edges=edges,
            metadata={"n_samples": cfg.n_samples, "seed": cfg.seed, "coverage": HISTOGRAM_COVERAGE},
        )

    def moment_oracle(
        self,
        expression: MomentExpression,
        params: SystemParams,
        cfg: McConfig,
        n_resamples: int = BOOTSTRAP_RESAMPLES,
    ) -> MomentEstimate:
        """
        Sample moment with a percentile bootstrap interval

        Chunks are resampled as blocks when there are enough of them,
        individual draws otherwise.

        Args:
            expression: EX, VarX, EY2 or EY4
            params: Scenario parameters
            cfg: Sample budget, seed and confidence
            n_resamples: Bootstrap resamples

        Returns:
            MomentEstimate
        """
        expression = MomentExpression(expression)
        if expression in (MomentExpression.EX, MomentExpression.VAR_X):
            blocks = self.sample_variable(ChannelVariable.X, params, cfg)
        else:
            power = 2 if expression == MomentExpression.EY2 else 4
            blocks = [y ** power for y in self.sample_variable(ChannelVariable.Y, params, cfg)]

        if len(blocks) < MIN_BOOTSTRAP_BLOCKS:
            blocks = [np.concatenate(blocks)]
            sums = np.stack([np.ones_like(blocks[0]), blocks[0], blocks[0] ** 2], axis=1)
        else:
            sums = np.array([[b.size, b.sum(), np.sum(b * b)] for b in blocks])

        value = self._moment_from_sums(expression, sums.sum(axis=0))
        rng = substream(cfg.seed, BOOTSTRAP_STREAM, 0)
        replicates = np.empty(n_resamples)
        for r in range(n_resamples):
            picks = rng.integers(0, sums.shape[0], size=sums.shape[0])
            replicates[r] = self._moment_from_sums(expression, sums[picks].sum(axis=0))

        tail = 50.0 * (1.0 - cfg.confidence)
        ci_low, ci_high = np.percentile(replicates, [tail, 100.0 - tail])
        logger.info(f"moment_oracle: {expression.value}={value:.6g} [{ci_low:.6g}, {ci_high:.6g}]")
        return MomentEstimate(
            expression=expression,
            value=value,
            ci_low=float(ci_low),
            ci_high=float(ci_high),
            n_samples=cfg.n_samples,
        )

    @staticmethod
    def _moment_from_sums(expression: MomentExpression, totals: np.ndarray) -> float:
        count, first, second = totals
        mean = first / count
        if expression == MomentExpression.VAR_X:
            return float((second - count * mean * mean) / (count - 1.0))
        return float(mean)
