"""
Outage Predictor - Fully connected tanh network over the scenario features

The parameter vector packs every layer as its weight matrix (row-major,
shape (out, in)) followed by its bias vector, from input to output.
"""
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np

from src.config.constants import EXTRAPOLATION_MARGIN, LAYER_SIZES, LOG_TARGET_FLOOR
from src.domain.entities.surrogate import MlpModel
from src.utilities.logger import get_logger

logger = get_logger(__name__)


def n_parameters(layer_sizes: Sequence[int] = LAYER_SIZES) -> int:
    return sum((n_in + 1) * n_out for n_in, n_out in zip(layer_sizes[:-1], layer_sizes[1:]))


def init_parameters(rng: np.random.Generator, layer_sizes: Sequence[int] = LAYER_SIZES) -> np.ndarray:
    """
    Fan-in scaled uniform initialization

    Every weight and bias of a layer is drawn from U(-1/sqrt(fan_in), 1/sqrt(fan_in)).

    Args:
        rng: Seeded generator
        layer_sizes: Units per layer, input first

    Returns:
        Flat parameter vector
    """
    parts = []
    for n_in, n_out in zip(layer_sizes[:-1], layer_sizes[1:]):
        limit = 1.0 / np.sqrt(n_in)
        parts.append(rng.uniform(-limit, limit, size=n_out * n_in))
        parts.append(rng.uniform(-limit, limit, size=n_out))
    return np.concatenate(parts)


def unpack(theta: np.ndarray, layer_sizes: Sequence[int] = LAYER_SIZES) -> Tuple[List[np.ndarray], List[np.ndarray]]:
    """Split a flat parameter vector into per-layer weights and biases"""
    weights, biases = [], []
    offset = 0
    for n_in, n_out in zip(layer_sizes[:-1], layer_sizes[1:]):
        weights.append(theta[offset:offset + n_out * n_in].reshape(n_out, n_in))
        offset += n_out * n_in
        biases.append(theta[offset:offset + n_out])
        offset += n_out
    return weights, biases


def pack(weights: Sequence[np.ndarray], biases: Sequence[np.ndarray]) -> np.ndarray:
    """Inverse of unpack"""
    return np.concatenate([part for w, b in zip(weights, biases) for part in (np.ravel(w), np.ravel(b))])


def normalization_bounds(features: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
    """
    Per-feature min/max of a training set

    A constant feature is widened by 0.5 on each side so the bounds stay
    strictly ordered.
    """
    low = np.min(features, axis=0).astype(float)
    high = np.max(features, axis=0).astype(float)
    flat = high <= low
    low[flat] -= 0.5
    high[flat] += 0.5
    return low, high


def normalize(features: np.ndarray, norm_min: np.ndarray, norm_max: np.ndarray) -> np.ndarray:
    """Map [norm_min, norm_max] onto [-1, 1] per feature"""
    return 2.0 * (np.asarray(features, dtype=float) - norm_min) / (norm_max - norm_min) - 1.0


def encode_targets(targets: np.ndarray, log_targets: bool) -> np.ndarray:
    targets = np.asarray(targets, dtype=float)
    if not log_targets:
        return targets
    return np.log10(np.maximum(targets, LOG_TARGET_FLOOR))


def decode_outputs(outputs: np.ndarray, log_targets: bool) -> np.ndarray:
    return 10.0 ** outputs if log_targets else outputs


def forward(theta: np.ndarray, inputs: np.ndarray, layer_sizes: Sequence[int] = LAYER_SIZES,
            keep_activations: bool = False):
    """
    Network output for normalized inputs

    Args:
        theta: Flat parameter vector
        inputs: (n, n_features) normalized inputs
        layer_sizes: Units per layer
        keep_activations: Also return the per-layer activations, input first

    Returns:
        (n,) outputs, or (outputs, activations)
    """
    weights, biases = unpack(theta, layer_sizes)
    activation = np.atleast_2d(inputs)
    activations = [activation]
    last = len(weights) - 1
    for i, (w, b) in enumerate(zip(weights, biases)):
        pre = activation @ w.T + b
        activation = pre if i == last else np.tanh(pre)
        activations.append(activation)
    outputs = activation[:, 0]
    if keep_activations:
        return outputs, activations
    return outputs


def jacobian(theta: np.ndarray, inputs: np.ndarray, layer_sizes: Sequence[int] = LAYER_SIZES) -> np.ndarray:
    """
    Derivatives of each output with respect to every parameter

    Backpropagation of a unit output sensitivity through the tanh layers;
    columns follow the pack order.

    Args:
        theta: Flat parameter vector
        inputs: (n, n_features) normalized inputs
        layer_sizes: Units per layer

    Returns:
        (n, n_parameters) Jacobian
    """
    weights, _ = unpack(theta, layer_sizes)
    _, activations = forward(theta, inputs, layer_sizes, keep_activations=True)
    n = activations[0].shape[0]

    blocks = []
    delta = np.ones((n, 1))
    for layer in range(len(weights) - 1, -1, -1):
        below = activations[layer]
        d_weights = np.einsum("no,ni->noi", delta, below).reshape(n, -1)
        blocks.append(np.hstack([d_weights, delta]))
        if layer > 0:
            delta = (delta @ weights[layer]) * (1.0 - below ** 2)
    return np.hstack(blocks[::-1])


def build_model(theta: np.ndarray, norm_min: np.ndarray, norm_max: np.ndarray,
                metadata: Optional[Dict] = None) -> MlpModel:
    """Freeze a parameter vector into an MlpModel"""
    weights, biases = unpack(np.array(theta, dtype=float), LAYER_SIZES)
    return MlpModel(
        layer_sizes=LAYER_SIZES,
        weights=tuple(weights),
        biases=tuple(biases),
        norm_min=norm_min,
        norm_max=norm_max,
        activation="tanh",
        metadata=dict(metadata or {}),
    )


class OutagePredictor:
    """Inference wrapper around a trained MlpModel; thread-safe"""

    def __init__(self, model: MlpModel):
        self.model = model
        self.theta = pack(model.weights, model.biases)
        span = model.norm_max - model.norm_min
        self.lower_limit = model.norm_min - EXTRAPOLATION_MARGIN * span
        self.upper_limit = model.norm_max + EXTRAPOLATION_MARGIN * span

    def raw_outputs(self, features: np.ndarray) -> np.ndarray:
        """Unclamped predictions in probability space"""
        inputs = normalize(np.atleast_2d(features), self.model.norm_min, self.model.norm_max)
        outputs = forward(self.theta, inputs, self.model.layer_sizes)
        return decode_outputs(outputs, self.model.log_targets)

    def predict(self, features: np.ndarray) -> np.ndarray:
        """Predictions clamped to [0, 1]"""
        return np.clip(self.raw_outputs(features), 0.0, 1.0)

    def outside_range(self, features: np.ndarray) -> np.ndarray:
        """Per-row mask of inputs beyond the training range plus the margin"""
        features = np.atleast_2d(features)
        return np.any((features < self.lower_limit) | (features > self.upper_limit), axis=1)
