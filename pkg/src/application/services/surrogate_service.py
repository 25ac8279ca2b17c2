"""
Surrogate Service - Outage prediction with a trained network and its regression metrics
"""
from typing import Dict, Sequence

import numpy as np
import pandas as pd

from src.config.constants import OutageMethod
from src.domain.entities.outage import FLAG_EXTRAPOLATION, ErrorKind, OutageEstimate
from src.domain.entities.surrogate import MlpModel
from src.domain.value_objects.system_params import SystemParams
from src.error_trace.exceptions import ContractViolationError, UndefinedMetricError
from src.application.services.training_service import split_xy
from src.models.outage_predictor import OutagePredictor
from src.utilities.logger import get_logger

logger = get_logger(__name__)


def scenario_features(params: SystemParams) -> np.ndarray:
    """[gamma_th_db, gamma_bar_db, sigma_sr, sigma_rd, sigma_ir, sigma_id, N]"""
    return np.array([
        params.gamma_th_db,
        params.gamma_bar_db,
        params.sigma_sr,
        params.sigma_rd,
        params.sigma_ir,
        params.sigma_id,
        float(params.n_elements),
    ])


def regression_scores(predicted: np.ndarray, actual: np.ndarray) -> Dict[str, float]:
    """
    Mean square error and Pearson R of predictions against targets

    Args:
        predicted: Predicted outage values
        actual: True outage values

    Returns:
        {"mse": ..., "r": ...}
    """
    predicted = np.asarray(predicted, dtype=float)
    actual = np.asarray(actual, dtype=float)
    if predicted.shape != actual.shape or actual.size == 0:
        raise ContractViolationError("predictions and targets must be nonempty and aligned")
    mse = float(np.mean((predicted - actual) ** 2))
    if np.ptp(actual) == 0 or np.ptp(predicted) == 0:
        raise UndefinedMetricError(
            "R is undefined for constant predictions or targets",
            details={"mse": mse, "n": int(actual.size)}
        )
    r = float(np.corrcoef(predicted, actual)[0, 1])
    return {"mse": mse, "r": r}


class SurrogateService:
    """Inference with a trained MlpModel"""

    def predict_op(self, model: MlpModel, features: Sequence[float]) -> OutageEstimate:
        """
        Surrogate outage probability of one scenario

        Args:
            model: Trained network
            features: [gamma_th_db, gamma_bar_db, sigma_sr, sigma_rd, sigma_ir, sigma_id, N]

        Returns:
            OutageEstimate tagged surrogate; err is the validation RMSE
        """
        features = np.asarray(features, dtype=float).reshape(1, -1)
        if features.shape[1] != model.layer_sizes[0]:
            raise ContractViolationError(
                f"the surrogate takes {model.layer_sizes[0]} features",
                details={"got": features.shape[1]}
            )
        predictor = OutagePredictor(model)
        flags = []
        if predictor.outside_range(features)[0]:
            flags.append(FLAG_EXTRAPOLATION)
            logger.warning(f"surrogate input outside the training range: {features[0].tolist()}")
        value = float(predictor.predict(features)[0])
        return OutageEstimate(
            value=value,
            method=OutageMethod.SURROGATE,
            err=model.validation_rmse,
            err_kind=ErrorKind.MODEL,
            flags=flags,
            metadata={"raw_output": float(predictor.raw_outputs(features)[0])},
        )

    def predict_scenario(self, model: MlpModel, params: SystemParams) -> OutageEstimate:
        return self.predict_op(model, scenario_features(params))

    def predict_batch(self, model: MlpModel, features: np.ndarray) -> np.ndarray:
        """Clamped predictions for many feature rows at once"""
        predictor = OutagePredictor(model)
        features = np.atleast_2d(np.asarray(features, dtype=float))
        outside = int(np.count_nonzero(predictor.outside_range(features)))
        if outside:
            logger.warning(f"{outside} of {features.shape[0]} surrogate inputs outside the training range")
        return predictor.predict(features)

    def regression_metrics(self, model: MlpModel, split: pd.DataFrame) -> Dict[str, float]:
        """MSE and Pearson R of the model on a dataset split"""
        features, targets = split_xy(split)
        return regression_scores(self.predict_batch(model, features), targets)
