"""Gradient-boosted decision trees on the binary logistic objective."""

from __future__ import annotations

import logging
import math
from dataclasses import asdict, dataclass, field, replace
from typing import Any

import numpy as np

from core.config import (
    EARLY_STOPPING_PATIENCE,
    GBDT_GAMMA,
    GBDT_LEARNING_RATE,
    GBDT_MAX_DEPTH,
    GBDT_MIN_CHILD_WEIGHT,
    GBDT_N_ESTIMATORS,
    GBDT_REG_LAMBDA,
    GBDT_SUBSAMPLE,
)
from core.errors import ConfigError, SchemaError, TrainingError
from core.features import dictionary_hash
from core.learner import Learner
from core.maths import logit, sigmoid
from learners._tree import Tree, TreeParams, build_tree, presort

logger = logging.getLogger(__name__)

MODEL_FORMAT = 1


@dataclass(frozen=True)
class GBDTParams:
    max_depth: int = GBDT_MAX_DEPTH
    learning_rate: float = GBDT_LEARNING_RATE
    n_estimators: int = GBDT_N_ESTIMATORS
    min_child_weight: float = GBDT_MIN_CHILD_WEIGHT
    subsample: float = GBDT_SUBSAMPLE
    scale_pos_weight: float = 1.0
    reg_lambda: float = GBDT_REG_LAMBDA
    gamma: float = GBDT_GAMMA
    seed: int = 0
    early_stopping: int | None = EARLY_STOPPING_PATIENCE

    def __post_init__(self) -> None:
        if self.max_depth < 1:
            raise ConfigError(f"max_depth must be >= 1, got {self.max_depth}")
        if not 0 < self.learning_rate <= 1:
            raise ConfigError(f"learning_rate must be in (0, 1], got {self.learning_rate}")
        if self.n_estimators < 0:
            raise ConfigError(f"n_estimators must be >= 0, got {self.n_estimators}")
        if not 0 < self.subsample <= 1:
            raise ConfigError(f"subsample must be in (0, 1], got {self.subsample}")
        if self.scale_pos_weight <= 0:
            raise ConfigError(f"scale_pos_weight must be > 0, got {self.scale_pos_weight}")
        if self.min_child_weight < 0 or self.reg_lambda < 0 or self.gamma < 0:
            raise ConfigError("min_child_weight, reg_lambda and gamma must be >= 0")

    def tree_params(self) -> TreeParams:
        return TreeParams(
            max_depth=self.max_depth,
            learning_rate=self.learning_rate,
            min_child_weight=self.min_child_weight,
            reg_lambda=self.reg_lambda,
            gamma=self.gamma,
        )

    def to_dict(self) -> dict[str, Any]:
        return asdict(self)

    @classmethod
    def from_dict(cls, data: dict[str, Any]) -> "GBDTParams":
        known = set(cls.__dataclass_fields__)
        unknown = sorted(set(data) - known)
        if unknown:
            raise ConfigError(f"unknown GBDT parameters: {', '.join(unknown)}")
        return cls(**data)


@dataclass
class GBDTModel:
    trees: list[Tree]
    base_score: float
    feature_names: list[str]
    params: GBDTParams
    history: list[dict[str, float]] = field(default_factory=list)

    @property
    def dictionary_hash(self) -> str:
        return dictionary_hash(self.feature_names)

    def margin(self, X: np.ndarray) -> np.ndarray:
        out = np.full(X.shape[0], self.base_score, dtype=np.float64)
        for tree in self.trees:
            out += tree.predict(X)
        return out

    def gains(self) -> dict[int, float]:
        total: dict[int, float] = {}
        for tree in self.trees:
            for f, gain in tree.gains.items():
                total[f] = total.get(f, 0.0) + gain
        return total

    def to_dict(self) -> dict[str, Any]:
        return {
            "format": MODEL_FORMAT,
            "kind": "gbdt",
            "params": self.params.to_dict(),
            "base_score": self.base_score,
            "feature_names": list(self.feature_names),
            "dictionary_hash": self.dictionary_hash,
            "trees": [t.to_dict() for t in self.trees],
            "history": self.history,
        }

    @classmethod
    def from_dict(cls, data: dict[str, Any]) -> "GBDTModel":
        if data.get("kind") != "gbdt" or data.get("format") != MODEL_FORMAT:
            raise SchemaError("not a gbdt model file of a supported format")
        model = cls(
            trees=[Tree.from_dict(t) for t in data["trees"]],
            base_score=float(data["base_score"]),
            feature_names=list(data["feature_names"]),
            params=GBDTParams.from_dict(data["params"]),
            history=list(data.get("history", [])),
        )
        if model.dictionary_hash != data.get("dictionary_hash"):
            raise SchemaError("gbdt model feature names do not match its dictionary hash")
        return model


def _logloss(y: np.ndarray, p: np.ndarray) -> float:
    p = np.clip(p, 1e-15, 1.0 - 1e-15)
    return float(-np.mean(y * np.log(p) + (1.0 - y) * np.log(1.0 - p)))


def _check_labels(y: np.ndarray) -> np.ndarray:
    y = np.asarray(y, dtype=np.float64)
    if np.isnan(y).any():
        raise TrainingError("labels contain NaN")
    if not np.isin(y, (0.0, 1.0)).all():
        raise TrainingError("labels must be 0 or 1")
    return y


def gbdt_train(
    X: np.ndarray,
    y: np.ndarray,
    params: GBDTParams | None = None,
    val: tuple[np.ndarray, np.ndarray] | None = None,
    feature_names: list[str] | None = None,
) -> GBDTModel:
    params = params or GBDTParams()
    X = np.asarray(X, dtype=np.float64)
    y = _check_labels(y)
    if X.ndim != 2 or X.shape[0] != y.shape[0]:
        raise ValueError(f"X has shape {X.shape} but there are {y.shape[0]} labels")
    names = list(feature_names) if feature_names is not None else [f"f{i}" for i in range(X.shape[1])]
    if len(names) != X.shape[1]:
        raise SchemaError(f"{len(names)} feature names for {X.shape[1]} columns")

    if y.size == 0 or y.min() == y.max():
        mean = float(y.mean()) if y.size else 0.5
        logger.warning("all training labels are %s; fitting a constant model", "equal" if y.size else "absent")
        return GBDTModel(trees=[], base_score=logit(mean), feature_names=names, params=params)

    n = X.shape[0]
    weights = np.where(y == 1.0, params.scale_pos_weight, 1.0)
    order = presort(X)
    rng = np.random.default_rng(params.seed)
    tree_params = params.tree_params()
    margin = np.zeros(n, dtype=np.float64)
    val_margin = None
    if val is not None:
        X_val = np.asarray(val[0], dtype=np.float64)
        y_val = _check_labels(val[1])
        val_margin = np.zeros(X_val.shape[0], dtype=np.float64)

    model = GBDTModel(trees=[], base_score=0.0, feature_names=names, params=params)
    best_loss = math.inf
    best_round = 0
    stale = 0
    for round_no in range(params.n_estimators):
        p = sigmoid(margin)
        g = (p - y) * weights
        h = p * (1.0 - p) * weights
        rows = None
        if params.subsample < 1.0:
            size = max(1, int(round(params.subsample * n)))
            rows = np.sort(rng.choice(n, size=size, replace=False))
        tree = build_tree(X, g, h, order, tree_params, rows)
        model.trees.append(tree)
        margin += tree.predict(X)
        record = {"round": float(round_no + 1), "train_loss": _logloss(y, sigmoid(margin))}
        if val_margin is not None:
            val_margin += tree.predict(X_val)
            loss = _logloss(y_val, sigmoid(val_margin))
            record["val_loss"] = loss
            if loss < best_loss - 1e-12:
                best_loss, best_round, stale = loss, round_no + 1, 0
            else:
                stale += 1
        model.history.append(record)
        if val_margin is not None and params.early_stopping and stale >= params.early_stopping:
            logger.debug("early stop at round %d, best round %d", round_no + 1, best_round)
            model.trees = model.trees[:best_round]
            model.history = model.history[:best_round]
            break
    return model


def gbdt_predict(model: GBDTModel, X: np.ndarray) -> np.ndarray:
    X = np.asarray(X, dtype=np.float64)
    if X.ndim != 2 or X.shape[1] != len(model.feature_names):
        raise SchemaError(
            f"model expects {len(model.feature_names)} features, got matrix of shape {X.shape}"
        )
    return sigmoid(model.margin(X))


def feature_importance(model: GBDTModel) -> dict[str, float]:
    """Accumulated split gain per feature, normalised to sum to one."""
    gains = model.gains()
    total = sum(gains.values())
    if not gains or total <= 0:
        return {}
    return {model.feature_names[f]: gain / total for f, gain in sorted(gains.items())}


class GBDTLearner(Learner):
    name = "gbdt"
    missing_policy = "learned default direction"

    def __init__(self, params: GBDTParams | None = None) -> None:
        super().__init__()
        self.params = params or GBDTParams()
        self.model: GBDTModel | None = None

    def with_params(self, **overrides: Any) -> "GBDTLearner":
        return GBDTLearner(replace(self.params, **overrides))

    def fit(self, X, y, val=None) -> "GBDTLearner":
        names = self.feature_names or None
        self.model = gbdt_train(X, y, self.params, val=val, feature_names=names)
        self.feature_names = list(self.model.feature_names)
        return self

    def _require_model(self) -> GBDTModel:
        if self.model is None:
            raise RuntimeError("gbdt learner is not fitted")
        return self.model

    def predict_proba(self, X: np.ndarray) -> np.ndarray:
        return gbdt_predict(self._require_model(), X)

    def feature_importance(self) -> dict[str, float]:
        return feature_importance(self._require_model())

    def to_dict(self) -> dict[str, Any]:
        return self._require_model().to_dict()

    @classmethod
    def from_dict(cls, data: dict[str, Any]) -> "GBDTLearner":
        model = GBDTModel.from_dict(data)
        learner = cls(model.params)
        learner.model = model
        learner.feature_names = list(model.feature_names)
        return learner


def create_learner() -> Learner:
    return GBDTLearner()
