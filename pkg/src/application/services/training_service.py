"""
Training Service - Full-batch Levenberg-Marquardt training of the outage surrogate
"""
from typing import Optional, Tuple

import numpy as np
import pandas as pd
from scipy import linalg

from src.config.constants import FEATURE_COLUMNS, TARGET_COLUMN
from src.config.settings import get_settings
from src.domain.entities.surrogate import MlpModel, TrainReport
from src.domain.value_objects.lm_hyper import LmHyperParams
from src.error_trace.exceptions import ContractViolationError, DataScaleError, TrainingError
from src.models import outage_predictor
from src.numerics.streams import stream
from src.utilities.helpers import ordered_map
from src.utilities.logger import get_logger

logger = get_logger(__name__)

# Jacobian rows per block; fixed so the assembled matrix never depends on workers
JACOBIAN_BLOCK_ROWS = 256


def split_xy(frame: pd.DataFrame) -> Tuple[np.ndarray, np.ndarray]:
    """Feature matrix and target vector of a dataset frame"""
    if frame.empty:
        raise ContractViolationError("dataset split is empty")
    return frame[FEATURE_COLUMNS].to_numpy(dtype=float), frame[TARGET_COLUMN].to_numpy(dtype=float)


class TrainingService:
    """Levenberg-Marquardt over every weight and bias of the fixed network"""

    def __init__(self, workers: Optional[int] = None):
        self.workers = workers or get_settings().workers

    def jacobian(self, theta: np.ndarray, inputs: np.ndarray) -> np.ndarray:
        """Jacobian assembled from fixed row blocks in order"""
        starts = range(0, inputs.shape[0], JACOBIAN_BLOCK_ROWS)
        blocks = ordered_map(
            lambda start: outage_predictor.jacobian(theta, inputs[start:start + JACOBIAN_BLOCK_ROWS]),
            starts,
            self.workers,
        )
        return np.vstack(blocks)

    @staticmethod
    def _mse(theta: np.ndarray, inputs: np.ndarray, targets: np.ndarray) -> float:
        residual = targets - outage_predictor.forward(theta, inputs)
        return float(np.mean(residual * residual))

    def _solve(self, jtj: np.ndarray, gradient: np.ndarray, damping: float, hyper: LmHyperParams) -> Tuple[np.ndarray, float]:
        """Damped normal-equation step, raising the damping until the system factors"""
        identity = np.eye(jtj.shape[0])
        while True:
            try:
                factor = linalg.cho_factor(jtj + damping * identity)
                return linalg.cho_solve(factor, gradient), damping
            except linalg.LinAlgError:
                damping *= hyper.lambda_up
                logger.debug(f"normal equations singular, damping raised to {damping:.1e}")
                if damping > hyper.lambda_max:
                    raise TrainingError(
                        "normal equations stay singular up to the maximum damping",
                        details={"lambda_max": hyper.lambda_max}
                    )

    def train_lm(
        self,
        train: pd.DataFrame,
        validation: pd.DataFrame,
        hyper: Optional[LmHyperParams] = None,
        seed: int = 0,
        log_targets: bool = False,
    ) -> Tuple[MlpModel, TrainReport]:
        """
        Train the surrogate with validation-based early stopping

        Each epoch solves (J^T J + lambda I) delta = J^T r on the whole
        training split. A step is kept when it lowers the training MSE
        (lambda shrinks), otherwise lambda grows and the step is retried.
        Training stops once the validation MSE has not improved for
        `patience` epochs; the best-validation weights are returned.

        Args:
            train: Training split (dataset columns)
            validation: Validation split
            hyper: Damping schedule and stopping rule
            seed: Initialization seed
            log_targets: Fit log10 of the outage instead of the raw value

        Returns:
            (MlpModel, TrainReport)
        """
        hyper = hyper or LmHyperParams()
        train_x, train_y = split_xy(train)
        val_x, val_y = split_xy(validation)

        norm_min, norm_max = outage_predictor.normalization_bounds(train_x)
        train_in = outage_predictor.normalize(train_x, norm_min, norm_max)
        val_in = outage_predictor.normalize(val_x, norm_min, norm_max)
        train_t = outage_predictor.encode_targets(train_y, log_targets)
        val_t = outage_predictor.encode_targets(val_y, log_targets)
        if not (np.all(np.isfinite(train_in)) and np.all(np.isfinite(val_in))):
            raise DataScaleError("non-finite features in the training data")

        theta = outage_predictor.init_parameters(stream(seed, 0))
        damping = hyper.lambda0
        train_mse = self._mse(theta, train_in, train_t)
        report = TrainReport(
            train_mse=[train_mse],
            validation_mse=[self._mse(theta, val_in, val_t)],
            damping=[damping],
        )
        best_theta = theta.copy()
        logger.info(
            f"train_lm: {train_x.shape[0]} train / {val_x.shape[0]} validation records, "
            f"{theta.size} parameters, seed={seed}, log_targets={log_targets}"
        )

        epoch = 0
        for epoch in range(1, hyper.max_epochs + 1):
            jac = self.jacobian(theta, train_in)
            residual = train_t - outage_predictor.forward(theta, train_in)
            if not (np.all(np.isfinite(jac)) and np.all(np.isfinite(residual))):
                raise DataScaleError("non-finite Jacobian or residual", details={"epoch": epoch})
            jtj = jac.T @ jac
            gradient = jac.T @ residual

            for _ in range(hyper.max_retries):
                step, damping = self._solve(jtj, gradient, damping, hyper)
                candidate = theta + step
                candidate_mse = self._mse(candidate, train_in, train_t)
                if candidate_mse < train_mse:
                    theta, train_mse = candidate, candidate_mse
                    damping = max(damping * hyper.lambda_down, np.finfo(float).tiny)
                    break
                damping = min(damping * hyper.lambda_up, hyper.lambda_max)
            else:
                logger.debug(f"epoch {epoch}: no decrease after {hyper.max_retries} retries")

            validation_mse = self._mse(theta, val_in, val_t)
            report.train_mse.append(train_mse)
            report.validation_mse.append(validation_mse)
            report.damping.append(damping)
            logger.debug(f"epoch {epoch}: train={train_mse:.3e} validation={validation_mse:.3e} lambda={damping:.1e}")

            if validation_mse < report.validation_mse[report.best_epoch]:
                report.best_epoch = epoch
                best_theta = theta.copy()
            elif epoch - report.best_epoch >= hyper.patience:
                report.early_stopped = True
                break

        report.stop_epoch = epoch
        metadata = {
            "seed": int(seed),
            "best_epoch": int(report.best_epoch),
            "validation_mse": float(report.best_validation_mse),
            "log_targets": bool(log_targets),
            "n_train": int(train_x.shape[0]),
            "hyper": hyper.to_dict(),
        }
        logger.info(
            f"train_lm finished: best epoch {report.best_epoch}, stop epoch {report.stop_epoch}, "
            f"validation MSE {report.best_validation_mse:.3e}"
        )
        model = outage_predictor.build_model(best_theta, norm_min, norm_max, metadata)
        return model, report
