from __future__ import annotations

import math

import numpy as np
import pytest

from core.errors import ConfigError, SchemaError, TrainingError
from learners.mlp import (
    MLPLearner,
    MLPModel,
    MLPParams,
    Preprocessor,
    forward,
    init_layers,
    loss_and_grads,
)


@pytest.mark.parametrize("seed", range(20))
def test_gradients_match_finite_differences(seed: int) -> None:
    rng = np.random.default_rng(seed)
    layers = init_layers([4, 5, 3, 2], rng)
    X = rng.normal(size=(6, 4))
    y = (rng.random(6) < 0.5).astype(np.float64)
    _, grads = loss_and_grads(layers, X, y)
    eps = 1e-6
    for (W, b), (gW, gb) in zip(layers, grads):
        for param, grad in ((W, gW), (b, gb)):
            flat = param.reshape(-1)
            for i in range(0, flat.size, max(1, flat.size // 5)):
                old = flat[i]
                flat[i] = old + eps
                up, _ = loss_and_grads(layers, X, y)
                flat[i] = old - eps
                down, _ = loss_and_grads(layers, X, y)
                flat[i] = old
                numeric = (up - down) / (2 * eps)
                assert math.isclose(grad.reshape(-1)[i], numeric, rel_tol=1e-4, abs_tol=1e-7)


def test_forward_returns_a_distribution() -> None:
    layers = init_layers([3, 4, 2], np.random.default_rng(1))
    probs, acts = forward(layers, np.ones((5, 3)))
    assert probs.shape == (5, 2)
    assert np.allclose(probs.sum(axis=1), 1.0)
    assert len(acts) == 2


def test_preprocessor_imputes_and_flags_missing() -> None:
    X = np.array([[1.0, 5.0], [np.nan, 5.0], [3.0, 5.0]])
    pre = Preprocessor.fit(X)
    assert pre.means.tolist() == [2.0, 5.0]
    assert pre.missing_cols.tolist() == [0]
    assert pre.n_outputs == 3
    Z = pre.transform(X)
    assert Z.shape == (3, 3)
    assert not np.isnan(Z).any()
    # constant column keeps unit scale
    assert np.all(Z[:, 1] == 0.0)


def test_fit_and_predict() -> None:
    rng = np.random.default_rng(2)
    X = rng.normal(size=(80, 3))
    y = (X[:, 0] + X[:, 1] > 0).astype(np.float64)
    learner = MLPLearner(MLPParams(widths=(8,), learning_rate=0.01, max_epochs=100, batch_size=16, seed=3))
    learner.fit(X, y)
    accuracy = float(np.mean(learner.predict(X) == y))
    assert accuracy > 0.85
    history = learner.model.history
    assert history[-1]["train_loss"] < history[0]["train_loss"]
    restored = MLPLearner.from_dict(learner.to_dict())
    assert np.allclose(restored.predict_proba(X), learner.predict_proba(X))


def test_training_is_seeded() -> None:
    rng = np.random.default_rng(4)
    X = rng.normal(size=(30, 2))
    y = (X[:, 0] > 0).astype(np.float64)
    params = MLPParams(widths=(4,), max_epochs=5, seed=9)
    a = MLPLearner(params).fit(X, y).predict_proba(X)
    b = MLPLearner(params).fit(X, y).predict_proba(X)
    assert np.array_equal(a, b)


def test_bad_inputs() -> None:
    X = np.zeros((3, 2))
    with pytest.raises(TrainingError):
        MLPLearner().fit(X, np.array([0.0, 1.0, 3.0]))
    with pytest.raises(ConfigError):
        MLPParams(widths=())
    with pytest.raises(ConfigError):
        MLPParams.from_dict({"hidden": [4]})
    with pytest.raises(RuntimeError):
        MLPLearner().predict_proba(X)
    learner = MLPLearner(MLPParams(widths=(2,), max_epochs=1)).fit(X, np.array([0.0, 1.0, 1.0]))
    with pytest.raises(SchemaError):
        learner.predict_proba(np.zeros((1, 3)))
    with pytest.raises(SchemaError):
        MLPModel.from_dict({**learner.to_dict(), "dictionary_hash": "0" * 64})
