"""
Model Repository - JSON persistence of trained surrogate networks
"""
from pathlib import Path
from typing import Any, Dict, List, Union

from pydantic import BaseModel, ConfigDict, Field, ValidationError

from src.config.constants import LAYER_SIZES, MODEL_FORMAT_VERSION
from src.domain.entities.surrogate import MlpModel
from src.error_trace.exceptions import ContractViolationError, StorageError
from src.utilities.logger import get_logger

logger = get_logger(__name__)


class LayerDocument(BaseModel):
    """One dense layer: w is row-major (out, in), b has length out"""
    w: List[List[float]]
    b: List[float]


class ModelDocument(BaseModel):
    """On-disk model format"""
    model_config = ConfigDict(extra="ignore")

    version: int = Field(MODEL_FORMAT_VERSION, ge=1)
    layer_sizes: List[int] = Field(default_factory=lambda: list(LAYER_SIZES))
    activation: str = "tanh"
    norm_min: List[float]
    norm_max: List[float]
    weights: List[LayerDocument]
    metadata: Dict[str, Any] = Field(default_factory=dict)

    @classmethod
    def from_model(cls, model: MlpModel) -> "ModelDocument":
        return cls(
            version=MODEL_FORMAT_VERSION,
            layer_sizes=list(model.layer_sizes),
            activation=model.activation,
            norm_min=model.norm_min.tolist(),
            norm_max=model.norm_max.tolist(),
            weights=[LayerDocument(w=w.tolist(), b=b.tolist()) for w, b in zip(model.weights, model.biases)],
            metadata=dict(model.metadata),
        )

    def to_model(self) -> MlpModel:
        return MlpModel(
            layer_sizes=tuple(self.layer_sizes),
            weights=tuple(layer.w for layer in self.weights),
            biases=tuple(layer.b for layer in self.weights),
            norm_min=self.norm_min,
            norm_max=self.norm_max,
            activation=self.activation,
            metadata=dict(self.metadata),
        )


class ModelRepository:
    """Saves and loads MlpModel documents"""

    def save(self, model: MlpModel, path: Union[str, Path]) -> Path:
        """
        Write a model document

        Floats are written by pydantic's JSON encoder, which keeps the
        shortest round-tripping representation.

        Args:
            model: Trained network
            path: Target file

        Returns:
            The written path
        """
        path = Path(path)
        document = ModelDocument.from_model(model)
        try:
            path.parent.mkdir(parents=True, exist_ok=True)
            path.write_text(document.model_dump_json(indent=2), encoding="utf-8")
        except OSError as e:
            raise StorageError(f"cannot write model to {path}", details={"path": str(path), "reason": str(e)}) from e
        logger.info(f"Saved model ({model.n_parameters} parameters) to {path}")
        return path

    def load(self, path: Union[str, Path]) -> MlpModel:
        """
        Read a model document

        Args:
            path: Model file

        Returns:
            MlpModel
        """
        path = Path(path)
        try:
            text = path.read_text(encoding="utf-8")
        except OSError as e:
            raise StorageError(f"cannot read model from {path}", details={"path": str(path), "reason": str(e)}) from e
        try:
            document = ModelDocument.model_validate_json(text)
        except ValidationError as e:
            raise StorageError(
                f"malformed model document {path}",
                details={"path": str(path), "errors": e.error_count()}
            ) from e
        if document.version > MODEL_FORMAT_VERSION:
            logger.warning(f"model format version {document.version} is newer than {MODEL_FORMAT_VERSION}")
        if document.activation != "tanh":
            raise ContractViolationError("unsupported activation", details={"activation": document.activation})
        return document.to_model()
