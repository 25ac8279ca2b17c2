"""
Surrogate Entities - Dataset records, trained models and training reports
"""
from dataclasses import dataclass, field
from typing import Any, Dict, List, Sequence, Tuple

import numpy as np

from src.config.constants import FEATURE_COLUMNS, LAYER_SIZES
from src.error_trace.exceptions import ContractViolationError


@dataclass(frozen=True)
class DatasetRecord:
    """One labelled scenario: [gamma_th_db, gamma_bar_db, sigma_sr, sigma_rd, sigma_ir, sigma_id, N]"""

    features: Tuple[float, ...]
    target: float

    def __post_init__(self):
        """Validate record"""
        object.__setattr__(self, "features", tuple(float(v) for v in self.features))
        if len(self.features) != len(FEATURE_COLUMNS):
            raise ContractViolationError(
                f"a record needs {len(FEATURE_COLUMNS)} features",
                details={"got": len(self.features)}
            )
        if not 0.0 <= self.target <= 1.0:
            raise ContractViolationError("record target must lie in [0, 1]", details={"target": self.target})
        n_elements = self.features[-1]
        if n_elements != round(n_elements) or n_elements < 1:
            raise ContractViolationError("N slot must hold a positive integer")

    def to_row(self) -> List[float]:
        return [*self.features, self.target]


@dataclass(frozen=True, eq=False)
class MlpModel:
    """Fully connected tanh network with min/max input normalization

    weights[i] has shape (layer_sizes[i+1], layer_sizes[i]) and biases[i]
    shape (layer_sizes[i+1],). The output layer is linear.
    """

    layer_sizes: Tuple[int, ...]
    weights: Tuple[np.ndarray, ...]
    biases: Tuple[np.ndarray, ...]
    norm_min: np.ndarray
    norm_max: np.ndarray
    activation: str = "tanh"
    metadata: Dict[str, Any] = field(default_factory=dict)

    def __post_init__(self):
        """Validate model"""
        object.__setattr__(self, "layer_sizes", tuple(int(v) for v in self.layer_sizes))
        if self.layer_sizes != LAYER_SIZES:
            raise ContractViolationError(
                "layer sizes are fixed",
                details={"expected": list(LAYER_SIZES), "got": list(self.layer_sizes)}
            )
        weights = tuple(np.array(w, dtype=float) for w in self.weights)
        biases = tuple(np.array(b, dtype=float).reshape(-1) for b in self.biases)
        if len(weights) != len(self.layer_sizes) - 1 or len(biases) != len(weights):
            raise ContractViolationError("one weight matrix and bias vector per layer")
        for i, (w, b) in enumerate(zip(weights, biases)):
            expected = (self.layer_sizes[i + 1], self.layer_sizes[i])
            if w.shape != expected or b.shape != (expected[0],):
                raise ContractViolationError(
                    f"layer {i} has the wrong shape",
                    details={"weights": list(w.shape), "expected": list(expected)}
                )
            w.setflags(write=False)
            b.setflags(write=False)
        object.__setattr__(self, "weights", weights)
        object.__setattr__(self, "biases", biases)

        norm_min = np.array(self.norm_min, dtype=float).reshape(-1)
        norm_max = np.array(self.norm_max, dtype=float).reshape(-1)
        if norm_min.size != self.layer_sizes[0] or norm_max.size != self.layer_sizes[0]:
            raise ContractViolationError("normalization bounds need one entry per input")
        if np.any(norm_max <= norm_min):
            raise ContractViolationError("normalization bounds must be strictly ordered")
        norm_min.setflags(write=False)
        norm_max.setflags(write=False)
        object.__setattr__(self, "norm_min", norm_min)
        object.__setattr__(self, "norm_max", norm_max)

    @property
    def n_parameters(self) -> int:
        return sum(w.size + b.size for w, b in zip(self.weights, self.biases))

    @property
    def log_targets(self) -> bool:
        return bool(self.metadata.get("log_targets", False))

    @property
    def validation_rmse(self) -> float:
        return float(np.sqrt(self.metadata.get("validation_mse", 0.0)))


@dataclass
class TrainReport:
    """Per-epoch history of a Levenberg-Marquardt run"""

    train_mse: List[float] = field(default_factory=list)
    validation_mse: List[float] = field(default_factory=list)
    damping: List[float] = field(default_factory=list)
    best_epoch: int = 0
    stop_epoch: int = 0
    early_stopped: bool = False
    test_mse: float = float("nan")
    regression_r: float = float("nan")

    @property
    def best_validation_mse(self) -> float:
        return self.validation_mse[self.best_epoch]

    def to_frame_rows(self) -> Sequence[Dict[str, float]]:
        """One row per epoch, used by the fig7 reproduction"""
        return [
            {"epoch": i, "train_mse": t, "validation_mse": v, "damping": d}
            for i, (t, v, d) in enumerate(zip(self.train_mse, self.validation_mse, self.damping))
        ]

    def to_dict(self) -> dict:
        return {
            "best_epoch": self.best_epoch,
            "stop_epoch": self.stop_epoch,
            "early_stopped": self.early_stopped,
            "best_validation_mse": self.best_validation_mse if self.validation_mse else None,
            "test_mse": self.test_mse,
            "regression_r": self.regression_r,
            "epochs": len(self.train_mse),
        }
