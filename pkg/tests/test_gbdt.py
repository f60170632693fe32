from __future__ import annotations

import math

import numpy as np
import pytest

from core.errors import ConfigError, SchemaError, TrainingError
from learners._tree import Tree, TreeParams, build_tree, presort
from learners.gbdt import (
    GBDTLearner,
    GBDTModel,
    GBDTParams,
    feature_importance,
    gbdt_predict,
    gbdt_train,
)


def _separable(n: int = 40, seed: int = 0) -> tuple[np.ndarray, np.ndarray]:
    rng = np.random.default_rng(seed)
    X = rng.normal(size=(n, 3))
    y = (X[:, 0] > 0).astype(np.float64)
    return X, y


def test_single_split_matches_hand_computation() -> None:
    X = np.array([[0.0], [1.0], [2.0], [3.0]])
    g = np.array([0.5, 0.5, -0.5, -0.5])
    h = np.full(4, 0.25)
    params = TreeParams(max_depth=1, learning_rate=0.3, min_child_weight=0.0, reg_lambda=1.0, gamma=0.0)
    tree = build_tree(X, g, h, presort(X), params)
    assert tree.feature.tolist() == [0, -1, -1]
    assert tree.threshold[0] == 1.5
    assert np.allclose(tree.value[1:], [-0.2, 0.2])
    assert math.isclose(tree.gains[0], 2.0 / 3.0)
    assert tree.depth() == 1
    # unseen NaN follows the default (left) branch
    assert np.allclose(tree.predict(np.array([[np.nan], [5.0]])), [-0.2, 0.2])


def test_min_child_weight_blocks_small_splits() -> None:
    X = np.array([[0.0], [1.0], [2.0], [3.0]])
    g = np.array([0.5, 0.5, -0.5, -0.5])
    h = np.full(4, 0.25)
    params = TreeParams(max_depth=3, learning_rate=0.3, min_child_weight=1.0, reg_lambda=1.0, gamma=0.0)
    tree = build_tree(X, g, h, presort(X), params)
    assert tree.n_nodes == 1
    assert tree.value[0] == 0.0


def test_tree_round_trip() -> None:
    X, y = _separable()
    model = gbdt_train(X, y, GBDTParams(n_estimators=3, max_depth=2))
    tree = model.trees[0]
    restored = Tree.from_dict(tree.to_dict())
    assert np.array_equal(restored.predict(X), tree.predict(X))
    assert restored.gains == tree.gains


def test_training_reduces_loss_and_separates() -> None:
    X, y = _separable()
    model = gbdt_train(X, y, GBDTParams(n_estimators=20, max_depth=3))
    losses = [r["train_loss"] for r in model.history]
    assert len(losses) == 20
    assert losses[-1] < losses[0] < math.log(2.0)
    preds = (gbdt_predict(model, X) >= 0.5).astype(np.float64)
    assert np.array_equal(preds, y)


def test_importance_is_normalised() -> None:
    X, y = _separable()
    model = gbdt_train(X, y, GBDTParams(n_estimators=10, max_depth=2), feature_names=["a", "b", "c"])
    importance = feature_importance(model)
    assert math.isclose(sum(importance.values()), 1.0)
    assert max(importance, key=importance.get) == "a"
    empty = GBDTModel(trees=[], base_score=0.0, feature_names=["a"], params=GBDTParams())
    assert feature_importance(empty) == {}


def test_constant_labels_give_a_constant_model() -> None:
    X = np.zeros((5, 2))
    model = gbdt_train(X, np.ones(5))
    assert model.trees == []
    assert model.base_score > 10.0
    assert np.all(gbdt_predict(model, X) > 0.99)


def test_bad_labels_and_params() -> None:
    X = np.zeros((3, 1))
    with pytest.raises(TrainingError):
        gbdt_train(X, np.array([0.0, 1.0, 2.0]))
    with pytest.raises(TrainingError):
        gbdt_train(X, np.array([0.0, np.nan, 1.0]))
    with pytest.raises(ConfigError):
        GBDTParams(max_depth=0)
    with pytest.raises(ConfigError):
        GBDTParams(subsample=1.5)
    with pytest.raises(ConfigError):
        GBDTParams.from_dict({"eta": 0.1})
    with pytest.raises(SchemaError):
        gbdt_train(X, np.array([0.0, 1.0, 1.0]), feature_names=["a", "b"])


def test_early_stopping_keeps_the_best_round() -> None:
    X = np.arange(20, dtype=np.float64)[:, None]
    y = (X[:, 0] >= 10).astype(np.float64)
    params = GBDTParams(n_estimators=50, max_depth=2, early_stopping=5)
    model = gbdt_train(X, y, params, val=(X, 1.0 - y))
    assert len(model.trees) == 1
    assert len(model.history) == 1
    assert "val_loss" in model.history[0]


def test_model_dict_checks_the_dictionary_hash() -> None:
    X, y = _separable()
    learner = GBDTLearner(GBDTParams(n_estimators=5, max_depth=2))
    learner.feature_names = ["a", "b", "c"]
    learner.fit(X, y)
    data = learner.to_dict()
    restored = GBDTLearner.from_dict(data)
    assert np.array_equal(restored.predict_proba(X), learner.predict_proba(X))
    assert restored.feature_importance() == learner.feature_importance()
    with pytest.raises(SchemaError):
        GBDTModel.from_dict({**data, "feature_names": ["c", "b", "a"]})
    with pytest.raises(SchemaError):
        GBDTModel.from_dict({**data, "kind": "mlp"})
    with pytest.raises(SchemaError):
        restored.predict_proba(X[:, :2])


def test_unfitted_learner_and_param_override() -> None:
    learner = GBDTLearner()
    with pytest.raises(RuntimeError):
        learner.predict_proba(np.zeros((1, 1)))
    tuned = learner.with_params(max_depth=4)
    assert tuned.params.max_depth == 4
    assert learner.params.max_depth == 8


def _best_split(x: np.ndarray, g: np.ndarray, h: np.ndarray, lam: float) -> tuple[float, float]:
    """Exhaustive search over every cut between consecutive distinct values."""
    order = np.argsort(x, kind="stable")
    xs, gs, hs = x[order], g[order], h[order]
    G, H = gs.sum(), hs.sum()
    best_gain, best_thr = -math.inf, math.nan
    for k in range(1, xs.size):
        if xs[k - 1] == xs[k]:
            continue
        GL, HL = gs[:k].sum(), hs[:k].sum()
        GR, HR = G - GL, H - HL
        gain = 0.5 * (GL**2 / (HL + lam) + GR**2 / (HR + lam) - G**2 / (H + lam))
        if gain > best_gain:
            best_gain, best_thr = gain, (xs[k - 1] + xs[k]) / 2.0
    return best_gain, best_thr


def test_single_split_matches_exhaustive_search() -> None:
    rng = np.random.default_rng(8)
    params = TreeParams(max_depth=1, learning_rate=1.0, min_child_weight=0.0, reg_lambda=1.0, gamma=0.0)
    for _ in range(50):
        n = int(rng.integers(5, 40))
        x = rng.normal(size=n)
        g = rng.normal(size=n)
        h = rng.uniform(0.05, 0.25, size=n)
        X = x[:, None]
        tree = build_tree(X, g, h, presort(X), params)
        gain, threshold = _best_split(x, g, h, 1.0)
        if gain <= 0:
            assert tree.n_nodes == 1
            continue
        assert tree.feature[0] == 0
        assert tree.threshold[0] == pytest.approx(threshold, rel=1e-12, abs=1e-12)
        assert tree.gains[0] == pytest.approx(gain, rel=1e-9)


def test_training_loss_never_increases() -> None:
    rng = np.random.default_rng(2)
    for seed in range(5):
        X = rng.normal(size=(120, 4))
        y = ((X[:, 0] + 0.8 * rng.normal(size=120)) > 0).astype(np.float64)
        model = gbdt_train(X, y, GBDTParams(n_estimators=30, max_depth=3, subsample=1.0, seed=seed))
        losses = [r["train_loss"] for r in model.history]
        assert all(b <= a + 1e-12 for a, b in zip(losses, losses[1:]))
