"""Multinomial logistic regression and nearest-centroid heads.

Both heads consume embedding vectors from any provider.  Training is
full-batch gradient descent from zero-initialized parameters, so a model
is a pure function of its data and config.  Models are persisted as
versioned JSON that records the provider id of the embedding space they
were trained in; loading into a different space is refused.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from pathlib import Path
from typing import Mapping, Sequence

import numpy as np

from .embedrank import cosine
from .errors import ArgumentError, ConfigError, DivergenceError, ValidationError
from .model import EmbeddingVector

MODEL_FILE_VERSION = 1

Example = tuple[EmbeddingVector, int]


@dataclass(frozen=True)
class TrainConfig:
    learning_rate: float = 0.1
    epochs: int = 300
    l2: float = 1e-4
    seed: int = 42
    tolerance: float = 1e-6

    def __post_init__(self):
        if self.learning_rate <= 0:
            raise ConfigError("learning_rate must be positive")
        if self.epochs < 1:
            raise ConfigError("epochs must be at least 1")
        if self.l2 < 0:
            raise ConfigError("l2 must be non-negative")
        if self.tolerance < 0:
            raise ConfigError("tolerance must be non-negative")


@dataclass(frozen=True, eq=False)
class LinearModel:
    """Softmax classifier: class scores are ``weights @ v + bias``."""

    weights: np.ndarray
    bias: np.ndarray
    class_names: tuple[str, ...]
    provider_id: str
    final_loss: float = math.nan
    loss_history: tuple[float, ...] = ()

    def __post_init__(self):
        w = np.asarray(self.weights, dtype=np.float64)
        b = np.asarray(self.bias, dtype=np.float64)
        if w.ndim != 2 or b.ndim != 1:
            raise ValidationError("weights must be a matrix and bias a vector")
        if w.shape[0] != b.shape[0] or w.shape[0] != len(self.class_names):
            raise ValidationError("class count must match weight rows and bias length")
        if not (np.all(np.isfinite(w)) and np.all(np.isfinite(b))):
            raise ValidationError("model parameters must be finite")
        w = w.copy()
        b = b.copy()
        w.flags.writeable = False
        b.flags.writeable = False
        object.__setattr__(self, "weights", w)
        object.__setattr__(self, "bias", b)
        object.__setattr__(self, "class_names", tuple(self.class_names))

    @property
    def n_classes(self) -> int:
        return int(self.weights.shape[0])

    @property
    def dims(self) -> int:
        return int(self.weights.shape[1])


def _design(examples: Sequence[Example], n_classes: int) -> tuple[np.ndarray, np.ndarray]:
    if not examples:
        raise ArgumentError("at least one training example is required")
    dims = examples[0][0].dims
    rows = []
    labels = []
    for vec, label in examples:
        if vec.dims != dims:
            raise ArgumentError(f"inconsistent dims: {vec.dims} vs {dims}")
        if not 0 <= label < n_classes:
            raise ArgumentError(f"label {label} outside range 0..{n_classes - 1}")
        rows.append(vec.values)
        labels.append(label)
    return np.stack(rows), np.asarray(labels, dtype=np.int64)


def _loss_and_grads(w, b, x, y, l2):
    """Mean cross-entropy plus l2 * ||W||^2, with analytic gradients.

    Overflow is not a fault here: a diverging run produces non-finite loss,
    which train() turns into DivergenceError.
    """
    with np.errstate(over="ignore", invalid="ignore"):
        return _loss_and_grads_raw(w, b, x, y, l2)


def _loss_and_grads_raw(w, b, x, y, l2):
    n = x.shape[0]
    logits = x @ w.T + b
    shifted = logits - logits.max(axis=1, keepdims=True)
    log_norm = np.log(np.exp(shifted).sum(axis=1))
    log_probs = shifted - log_norm[:, None]
    ce = -float(log_probs[np.arange(n), y].mean())
    loss = ce + l2 * float((w * w).sum())
    err = np.exp(log_probs)
    err[np.arange(n), y] -= 1.0
    err /= n
    grad_w = err.T @ x + 2.0 * l2 * w
    grad_b = err.sum(axis=0)
    return loss, grad_w, grad_b


def train(
    examples: Sequence[Example],
    n_classes: int,
    config: TrainConfig | None = None,
    *,
    class_names: Sequence[str] | None = None,
    provider_id: str = "",
) -> LinearModel:
    config = config or TrainConfig()
    if n_classes < 2:
        raise ArgumentError("need at least two classes")
    if class_names is None:
        class_names = [str(i) for i in range(n_classes)]
    if len(class_names) != n_classes:
        raise ArgumentError("class_names length must equal n_classes")
    x, y = _design(examples, n_classes)
    counts = np.bincount(y, minlength=n_classes)
    missing = [int(c) for c in np.flatnonzero(counts == 0)]
    if missing:
        raise ArgumentError(f"classes with zero examples: {missing}")

    w = np.zeros((n_classes, x.shape[1]))
    b = np.zeros(n_classes)
    history: list[float] = []
    stopped = False
    for epoch in range(config.epochs):
        loss, grad_w, grad_b = _loss_and_grads(w, b, x, y, config.l2)
        if not math.isfinite(loss):
            raise DivergenceError(epoch)
        history.append(loss)
        if len(history) >= 2 and abs(history[-2] - history[-1]) < config.tolerance:
            stopped = True
            break
        w -= config.learning_rate * grad_w
        b -= config.learning_rate * grad_b
    if not stopped:
        # loop exhausted after an update; record loss at the final point
        loss = _loss_and_grads(w, b, x, y, config.l2)[0]
        if not math.isfinite(loss):
            raise DivergenceError(config.epochs)
        history.append(loss)
    return LinearModel(
        w, b, tuple(class_names), provider_id, history[-1], tuple(history)
    )


def _softmax(logits: np.ndarray) -> np.ndarray:
    shifted = logits - logits.max()
    exp = np.exp(shifted)
    return exp / exp.sum()


def predict(model: LinearModel, v: EmbeddingVector) -> tuple[int, np.ndarray]:
    """Class index (ties to the lowest index) and softmax probabilities."""
    if v.dims != model.dims:
        raise ArgumentError(f"vector dims {v.dims} do not match model dims {model.dims}")
    probs = _softmax(model.weights @ v.values + model.bias)
    return int(np.argmax(probs)), probs


def centroid_classify(v: EmbeddingVector, centroids: Mapping[int, EmbeddingVector]) -> int:
    """Key of the centroid with the highest cosine; ties to the lowest key."""
    if not centroids:
        raise ArgumentError("at least one centroid is required")
    best_key = None
    best_sim = -math.inf
    for key in sorted(centroids):
        sim = cosine(v, centroids[key])
        if sim > best_sim:
            best_key, best_sim = key, sim
    return best_key


def class_centroids(examples: Sequence[Example]) -> dict[int, EmbeddingVector]:
    """Per-class mean vectors, keyed by class index."""
    if not examples:
        raise ArgumentError("at least one example is required")
    sums: dict[int, np.ndarray] = {}
    counts: dict[int, int] = {}
    dims = examples[0][0].dims
    for vec, label in examples:
        if vec.dims != dims:
            raise ArgumentError(f"inconsistent dims: {vec.dims} vs {dims}")
        if label in sums:
            sums[label] = sums[label] + vec.values
            counts[label] += 1
        else:
            sums[label] = vec.values.copy()
            counts[label] = 1
    return {
        label: EmbeddingVector(sums[label] / counts[label]) for label in sorted(sums)
    }


def gradient_check(
    model: LinearModel,
    examples: Sequence[Example],
    epsilon: float = 1e-5,
    l2: float = TrainConfig().l2,
) -> float:
    """Max relative error between analytic and central-difference gradients."""
    if not 0.0 < epsilon <= 1e-2:
        raise ArgumentError("epsilon must be in (0, 1e-2]")
    x, y = _design(examples, model.n_classes)
    if x.shape[1] != model.dims:
        raise ArgumentError("example dims do not match model dims")
    w_size = model.weights.size
    theta = np.concatenate([model.weights.ravel(), model.bias])

    def loss_at(point: np.ndarray) -> float:
        w = point[:w_size].reshape(model.weights.shape)
        return _loss_and_grads(w, point[w_size:], x, y, l2)[0]

    _, grad_w, grad_b = _loss_and_grads(
        model.weights, model.bias, x, y, l2
    )
    analytic = np.concatenate([grad_w.ravel(), grad_b])
    worst = 0.0
    for i in range(theta.size):
        bumped = theta.copy()
        bumped[i] += epsilon
        upper = loss_at(bumped)
        bumped[i] = theta[i] - epsilon
        lower = loss_at(bumped)
        numeric = (upper - lower) / (2.0 * epsilon)
        rel = abs(analytic[i] - numeric) / max(abs(analytic[i]), abs(numeric), 1e-6)
        worst = max(worst, rel)
    return worst


def save_model(model: LinearModel, path) -> None:
    payload = {
        "version": MODEL_FILE_VERSION,
        "classes": list(model.class_names),
        "dims": model.dims,
        "provider_id": model.provider_id,
        "weights": model.weights.tolist(),
        "bias": model.bias.tolist(),
    }
    Path(path).write_text(json.dumps(payload), encoding="utf-8")


def load_model(path, expect_provider: str | None = None) -> LinearModel:
    try:
        payload = json.loads(Path(path).read_text(encoding="utf-8"))
    except (OSError, json.JSONDecodeError) as exc:
        raise ConfigError(f"cannot read model file {path}: {exc}") from exc
    if not isinstance(payload, dict) or payload.get("version") != MODEL_FILE_VERSION:
        raise ConfigError(f"unsupported model file version in {path}")
    required = {"classes", "dims", "provider_id", "weights", "bias"}
    missing = required - payload.keys()
    if missing:
        raise ConfigError(f"model file {path} missing keys: {sorted(missing)}")
    try:
        model = LinearModel(
            np.asarray(payload["weights"], dtype=np.float64),
            np.asarray(payload["bias"], dtype=np.float64),
            tuple(payload["classes"]),
            str(payload["provider_id"]),
        )
    except (ValidationError, ValueError) as exc:
        raise ConfigError(f"model file {path} is malformed: {exc}") from exc
    if model.dims != payload["dims"]:
        raise ConfigError(
            f"model file {path} declares dims {payload['dims']} "
            f"but weights have {model.dims}"
        )
    if expect_provider is not None and model.provider_id != expect_provider:
        raise ConfigError(
            f"model was trained with provider {model.provider_id!r}, "
            f"got {expect_provider!r}"
        )
    return model
