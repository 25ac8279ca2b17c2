"""
Sweep Service - Outage by any method, at one point or along a parameter axis
"""
from typing import List, Optional, Sequence

import numpy as np
import pandas as pd

from src.config.constants import SWEEP_COLUMNS, OutageMethod, SweepAxis
from src.config.settings import get_settings
from src.domain.entities.outage import OutageEstimate
from src.domain.entities.surrogate import MlpModel
from src.domain.value_objects.mc_config import McConfig
from src.domain.value_objects.system_params import SystemParams
from src.error_trace.exceptions import ContractViolationError, UsageError
from src.application.services.montecarlo_service import MonteCarloService
from src.application.services.outage_service import OutageService
from src.application.services.surrogate_service import SurrogateService
from src.utilities.helpers import ordered_map
from src.utilities.logger import get_logger

logger = get_logger(__name__)


def axis_values(start: float, stop: float, steps: int, axis: SweepAxis) -> List[float]:
    """
    Evenly spaced axis points; the N axis is rounded to distinct integers

    Args:
        start: First value
        stop: Last value
        steps: Number of points (>= 2)
        axis: Swept parameter

    Returns:
        Axis values in order
    """
    if steps < 2:
        raise UsageError("a sweep needs at least 2 steps", details={"steps": steps})
    values = np.linspace(start, stop, steps)
    if SweepAxis(axis) == SweepAxis.N_ELEMENTS:
        return sorted({int(round(v)) for v in values})
    return [float(v) for v in values]


class SweepService:
    """Routes outage queries to the analytical, simulated or surrogate method"""

    def __init__(
        self,
        outage_service: Optional[OutageService] = None,
        mc_service: Optional[MonteCarloService] = None,
        surrogate_service: Optional[SurrogateService] = None,
        workers: Optional[int] = None,
    ):
        self.workers = workers or get_settings().workers
        self.outage_service = outage_service or OutageService()
        self.mc_service = mc_service or MonteCarloService()
        self.surrogate_service = surrogate_service or SurrogateService()

    def evaluate(
        self,
        method: OutageMethod,
        params: SystemParams,
        mc_config: Optional[McConfig] = None,
        model: Optional[MlpModel] = None,
    ) -> OutageEstimate:
        """
        Outage probability of one scenario by the named method

        Args:
            method: Outage method
            params: Scenario parameters
            mc_config: Sample budget for monte_carlo
            model: Trained network for surrogate

        Returns:
            OutageEstimate
        """
        method = OutageMethod(method)
        if method == OutageMethod.EXACT_NUMERIC:
            return self.outage_service.op_exact(params)
        if method == OutageMethod.MONTE_CARLO:
            return self.mc_service.estimate_op_mc(params, mc_config or McConfig())
        if method == OutageMethod.SURROGATE:
            if model is None:
                raise ContractViolationError("the surrogate method needs a trained model")
            return self.surrogate_service.predict_scenario(model, params)
        return self.outage_service.gamma_estimate(params, method)

    def sweep(
        self,
        base: SystemParams,
        axis: SweepAxis,
        values: Sequence[float],
        methods: Sequence[OutageMethod],
        mc_config: Optional[McConfig] = None,
        model: Optional[MlpModel] = None,
    ) -> pd.DataFrame:
        """
        Outage along one axis for every requested method

        Points run on the worker pool; rows come back in axis order, one per
        (axis value, method).

        Args:
            base: Scenario the axis is applied to
            axis: Swept parameter
            values: Axis values
            methods: Methods to evaluate (nonempty)
            mc_config: Sample budget for monte_carlo
            model: Trained network for surrogate

        Returns:
            DataFrame with columns axis_value, method, p_out, err
        """
        axis = SweepAxis(axis)
        if not methods:
            raise UsageError("at least one method is required")
        if len(values) < 2:
            raise UsageError("a sweep needs at least 2 axis values")
        methods = [OutageMethod(m) for m in methods]
        logger.info(f"sweep: axis={axis.value}, points={len(values)}, methods={[m.value for m in methods]}")

        def run_point(value: float) -> List[list]:
            params = base.with_updates(**{axis.value: value})
            rows = []
            for method in methods:
                estimate = self.evaluate(method, params, mc_config, model)
                rows.append([value, method.value, estimate.value, estimate.err])
            return rows

        blocks = ordered_map(run_point, values, self.workers)
        return pd.DataFrame([row for block in blocks for row in block], columns=SWEEP_COLUMNS)
