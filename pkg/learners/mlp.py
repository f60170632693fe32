"""Dense ReLU network with a two-way softmax head, trained with Adam."""

from __future__ import annotations

import base64
import logging
import math
from dataclasses import asdict, dataclass, field, replace
from typing import Any

import numpy as np

from core.config import (
    EARLY_STOPPING_PATIENCE,
    MLP_BATCH_SIZE,
    MLP_LEARNING_RATE,
    MLP_MAX_EPOCHS,
    MLP_WIDTHS,
)
from core.errors import ConfigError, SchemaError, TrainingError
from core.features import dictionary_hash
from core.learner import Learner

logger = logging.getLogger(__name__)

MODEL_FORMAT = 1
ADAM_BETA1 = 0.9
ADAM_BETA2 = 0.999
ADAM_EPS = 1e-8

Layers = list[tuple[np.ndarray, np.ndarray]]


@dataclass(frozen=True)
class MLPParams:
    widths: tuple[int, ...] = MLP_WIDTHS
    learning_rate: float = MLP_LEARNING_RATE
    batch_size: int = MLP_BATCH_SIZE
    max_epochs: int = MLP_MAX_EPOCHS
    patience: int = EARLY_STOPPING_PATIENCE
    seed: int = 0

    def __post_init__(self) -> None:
        object.__setattr__(self, "widths", tuple(int(w) for w in self.widths))
        if not self.widths or min(self.widths) < 1:
            raise ConfigError(f"hidden widths must be positive, got {self.widths}")
        if self.learning_rate <= 0:
            raise ConfigError(f"learning_rate must be > 0, got {self.learning_rate}")
        if self.batch_size < 1 or self.max_epochs < 1 or self.patience < 1:
            raise ConfigError("batch_size, max_epochs and patience must be >= 1")

    def to_dict(self) -> dict[str, Any]:
        data = asdict(self)
        data["widths"] = list(self.widths)
        return data

    @classmethod
    def from_dict(cls, data: dict[str, Any]) -> "MLPParams":
        unknown = sorted(set(data) - set(cls.__dataclass_fields__))
        if unknown:
            raise ConfigError(f"unknown MLP parameters: {', '.join(unknown)}")
        return cls(**data)


@dataclass
class Preprocessor:
    """Mean imputation, missingness bits for columns with NaN in training, standardisation."""

    means: np.ndarray
    missing_cols: np.ndarray
    center: np.ndarray
    scale: np.ndarray

    @classmethod
    def fit(cls, X: np.ndarray) -> "Preprocessor":
        nan = np.isnan(X)
        counts = (~nan).sum(axis=0)
        sums = np.where(nan, 0.0, X).sum(axis=0)
        means = np.divide(sums, counts, out=np.zeros(X.shape[1]), where=counts > 0)
        missing_cols = np.flatnonzero(nan.any(axis=0))
        filled = cls._fill(X, means, missing_cols)
        center = filled.mean(axis=0)
        scale = filled.std(axis=0)
        scale[scale == 0] = 1.0
        return cls(means=means, missing_cols=missing_cols, center=center, scale=scale)

    @staticmethod
    def _fill(X: np.ndarray, means: np.ndarray, missing_cols: np.ndarray) -> np.ndarray:
        nan = np.isnan(X)
        filled = np.where(nan, means[None, :], X)
        bits = nan[:, missing_cols].astype(np.float64)
        return np.hstack([filled, bits])

    def transform(self, X: np.ndarray) -> np.ndarray:
        return (self._fill(X, self.means, self.missing_cols) - self.center) / self.scale

    @property
    def n_outputs(self) -> int:
        return self.means.shape[0] + self.missing_cols.shape[0]


def _encode(arr: np.ndarray) -> dict[str, Any]:
    data = np.ascontiguousarray(arr, dtype="<f8")
    return {"shape": list(data.shape), "data": base64.b64encode(data.tobytes()).decode("ascii")}


def _decode(payload: dict[str, Any]) -> np.ndarray:
    raw = base64.b64decode(payload["data"])
    return np.frombuffer(raw, dtype="<f8").reshape(payload["shape"]).astype(np.float64)


def init_layers(sizes: list[int], rng: np.random.Generator) -> Layers:
    """He-normal weights and zero biases for consecutive layer sizes."""
    layers: Layers = []
    for fan_in, fan_out in zip(sizes[:-1], sizes[1:]):
        W = rng.normal(0.0, math.sqrt(2.0 / fan_in), size=(fan_in, fan_out))
        layers.append((W, np.zeros(fan_out)))
    return layers


def _softmax(z: np.ndarray) -> np.ndarray:
    z = z - z.max(axis=1, keepdims=True)
    e = np.exp(z)
    return e / e.sum(axis=1, keepdims=True)


def forward(layers: Layers, X: np.ndarray) -> tuple[np.ndarray, list[np.ndarray]]:
    """Class probabilities (n x 2) and the activations needed for backprop."""
    acts = [X]
    a = X
    for W, b in layers[:-1]:
        a = np.maximum(a @ W + b, 0.0)
        acts.append(a)
    W, b = layers[-1]
    return _softmax(a @ W + b), acts


def loss_and_grads(layers: Layers, X: np.ndarray, y: np.ndarray) -> tuple[float, Layers]:
    """Mean categorical cross-entropy and its gradient per (W, b)."""
    probs, acts = forward(layers, X)
    n = X.shape[0]
    y = y.astype(np.int64)
    picked = np.clip(probs[np.arange(n), y], 1e-300, None)
    loss = float(-np.mean(np.log(picked)))
    delta = probs.copy()
    delta[np.arange(n), y] -= 1.0
    delta /= n
    grads: Layers = []
    for i in range(len(layers) - 1, -1, -1):
        W, _ = layers[i]
        a = acts[i]
        grads.append((a.T @ delta, delta.sum(axis=0)))
        if i > 0:
            delta = (delta @ W.T) * (acts[i] > 0)
    grads.reverse()
    return loss, grads


@dataclass
class MLPModel:
    layers: Layers
    preprocessor: Preprocessor
    feature_names: list[str]
    params: MLPParams
    history: list[dict[str, float]] = field(default_factory=list)

    @property
    def dictionary_hash(self) -> str:
        return dictionary_hash(self.feature_names)

    def to_dict(self) -> dict[str, Any]:
        return {
            "format": MODEL_FORMAT,
            "kind": "mlp",
            "params": self.params.to_dict(),
            "feature_names": list(self.feature_names),
            "dictionary_hash": self.dictionary_hash,
            "preprocessor": {
                "means": _encode(self.preprocessor.means),
                "missing_cols": [int(c) for c in self.preprocessor.missing_cols],
                "center": _encode(self.preprocessor.center),
                "scale": _encode(self.preprocessor.scale),
            },
            "layers": [{"W": _encode(W), "b": _encode(b)} for W, b in self.layers],
            "history": self.history,
        }

    @classmethod
    def from_dict(cls, data: dict[str, Any]) -> "MLPModel":
        if data.get("kind") != "mlp" or data.get("format") != MODEL_FORMAT:
            raise SchemaError("not an mlp model file of a supported format")
        pre = data["preprocessor"]
        model = cls(
            layers=[(_decode(layer["W"]), _decode(layer["b"])) for layer in data["layers"]],
            preprocessor=Preprocessor(
                means=_decode(pre["means"]),
                missing_cols=np.asarray(pre["missing_cols"], dtype=np.int64),
                center=_decode(pre["center"]),
                scale=_decode(pre["scale"]),
            ),
            feature_names=list(data["feature_names"]),
            params=MLPParams.from_dict(data["params"]),
            history=list(data.get("history", [])),
        )
        if model.dictionary_hash != data.get("dictionary_hash"):
            raise SchemaError("mlp model feature names do not match its dictionary hash")
        return model


def _mean_loss(layers: Layers, X: np.ndarray, y: np.ndarray) -> float:
    probs, _ = forward(layers, X)
    picked = np.clip(probs[np.arange(X.shape[0]), y.astype(np.int64)], 1e-300, None)
    return float(-np.mean(np.log(picked)))


def mlp_train(
    X: np.ndarray,
    y: np.ndarray,
    params: MLPParams | None = None,
    val: tuple[np.ndarray, np.ndarray] | None = None,
    feature_names: list[str] | None = None,
) -> MLPModel:
    """Mini-batch Adam; early stopping restores the weights of the best epoch."""
    params = params or MLPParams()
    X = np.asarray(X, dtype=np.float64)
    y = np.asarray(y, dtype=np.float64)
    if np.isnan(y).any() or not np.isin(y, (0.0, 1.0)).all():
        raise TrainingError("labels must be 0 or 1 without NaN")
    if X.ndim != 2 or X.shape[0] != y.shape[0] or X.shape[0] == 0:
        raise ValueError(f"X has shape {X.shape} but there are {y.shape[0]} labels")
    names = list(feature_names) if feature_names is not None else [f"f{i}" for i in range(X.shape[1])]
    if len(names) != X.shape[1]:
        raise SchemaError(f"{len(names)} feature names for {X.shape[1]} columns")

    pre = Preprocessor.fit(X)
    Z = pre.transform(X)
    rng = np.random.default_rng(params.seed)
    layers = init_layers([Z.shape[1], *params.widths, 2], rng)
    m = [(np.zeros_like(W), np.zeros_like(b)) for W, b in layers]
    v = [(np.zeros_like(W), np.zeros_like(b)) for W, b in layers]
    Z_val = y_val = None
    if val is not None:
        Z_val = pre.transform(np.asarray(val[0], dtype=np.float64))
        y_val = np.asarray(val[1], dtype=np.float64)

    model = MLPModel(layers=layers, preprocessor=pre, feature_names=names, params=params)
    best = (math.inf, [(W.copy(), b.copy()) for W, b in layers])
    stale = 0
    step = 0
    lr = params.learning_rate
    for epoch in range(1, params.max_epochs + 1):
        order = rng.permutation(Z.shape[0])
        for batch_no, start in enumerate(range(0, Z.shape[0], params.batch_size)):
            idx = order[start : start + params.batch_size]
            loss, grads = loss_and_grads(layers, Z[idx], y[idx])
            if not math.isfinite(loss):
                raise TrainingError(
                    f"non-finite loss at epoch {epoch}, batch {batch_no} "
                    f"(batch size {idx.shape[0]}, input max |z| {np.abs(Z[idx]).max():.3g})"
                )
            step += 1
            corr1 = 1.0 - ADAM_BETA1**step
            corr2 = 1.0 - ADAM_BETA2**step
            for i, ((W, b), (gW, gb)) in enumerate(zip(layers, grads)):
                mW, mb = m[i]
                vW, vb = v[i]
                mW *= ADAM_BETA1
                mW += (1 - ADAM_BETA1) * gW
                mb *= ADAM_BETA1
                mb += (1 - ADAM_BETA1) * gb
                vW *= ADAM_BETA2
                vW += (1 - ADAM_BETA2) * gW * gW
                vb *= ADAM_BETA2
                vb += (1 - ADAM_BETA2) * gb * gb
                W -= lr * (mW / corr1) / (np.sqrt(vW / corr2) + ADAM_EPS)
                b -= lr * (mb / corr1) / (np.sqrt(vb / corr2) + ADAM_EPS)

        record = {"epoch": float(epoch), "train_loss": _mean_loss(layers, Z, y)}
        monitor = record["train_loss"]
        if Z_val is not None and Z_val.shape[0]:
            record["val_loss"] = _mean_loss(layers, Z_val, y_val)
            monitor = record["val_loss"]
        if not math.isfinite(monitor):
            raise TrainingError(f"non-finite loss after epoch {epoch}")
        model.history.append(record)
        if monitor < best[0] - 1e-12:
            best = (monitor, [(W.copy(), b.copy()) for W, b in layers])
            stale = 0
        else:
            stale += 1
            if stale >= params.patience:
                logger.debug("mlp early stop at epoch %d", epoch)
                break
    model.layers = best[1]
    return model


def mlp_predict(model: MLPModel, X: np.ndarray) -> np.ndarray:
    """Probability of the positive class (softmax position 1)."""
    X = np.asarray(X, dtype=np.float64)
    if X.ndim != 2 or X.shape[1] != len(model.feature_names):
        raise SchemaError(
            f"model expects {len(model.feature_names)} features, got matrix of shape {X.shape}"
        )
    probs, _ = forward(model.layers, model.preprocessor.transform(X))
    return probs[:, 1]


class MLPLearner(Learner):
    name = "mlp"
    missing_policy = "mean imputation plus missingness indicators"

    def __init__(self, params: MLPParams | None = None) -> None:
        super().__init__()
        self.params = params or MLPParams()
        self.model: MLPModel | None = None

    def with_params(self, **overrides: Any) -> "MLPLearner":
        return MLPLearner(replace(self.params, **overrides))

    def fit(self, X, y, val=None) -> "MLPLearner":
        self.model = mlp_train(X, y, self.params, val=val, feature_names=self.feature_names or None)
        self.feature_names = list(self.model.feature_names)
        return self

    def predict_proba(self, X: np.ndarray) -> np.ndarray:
        if self.model is None:
            raise RuntimeError("mlp learner is not fitted")
        return mlp_predict(self.model, X)

    def to_dict(self) -> dict[str, Any]:
        if self.model is None:
            raise RuntimeError("mlp learner is not fitted")
        return self.model.to_dict()

    @classmethod
    def from_dict(cls, data: dict[str, Any]) -> "MLPLearner":
        model = MLPModel.from_dict(data)
        learner = cls(model.params)
        learner.model = model
        learner.feature_names = list(model.feature_names)
        return learner


def create_learner() -> Learner:
    return MLPLearner()
