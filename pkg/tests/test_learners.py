from __future__ import annotations

import numpy as np
import pytest

from core.errors import ConfigError, SchemaError
from core.learner import Learner
from evalkit.metrics import f1
from learners import create_learner, learner_from_dict, list_available_learners, load_learner_class
from learners._bow import BowEncoder, bow_encode
from learners._search import expand_grid, grid_search, named_grid
from learners.gbdt import GBDTLearner
from learners.random_guess import RandomGuessLearner


class _ThresholdLearner(Learner):
    """Predicts positive when column 0 exceeds `cut`; records every fit."""

    name = "threshold"
    fits: list[float] = []

    def __init__(self, cut: float = 0.0) -> None:
        super().__init__()
        self.cut = cut

    def with_params(self, cut: float) -> "_ThresholdLearner":
        return _ThresholdLearner(cut)

    def fit(self, X, y, val=None) -> "_ThresholdLearner":
        _ThresholdLearner.fits.append(self.cut)
        return self

    def predict_proba(self, X: np.ndarray) -> np.ndarray:
        return (np.asarray(X)[:, 0] > self.cut).astype(np.float64)

    def to_dict(self) -> dict:
        return {"kind": "threshold", "cut": self.cut}

    @classmethod
    def from_dict(cls, data: dict) -> "_ThresholdLearner":
        return cls(data["cut"])


def test_learner_discovery() -> None:
    assert list_available_learners() == ["gbdt", "mlp", "random_guess"]
    assert load_learner_class("random-guess") is RandomGuessLearner
    assert isinstance(create_learner("gbdt"), GBDTLearner)
    with pytest.raises(ValueError):
        load_learner_class("_tree")


def test_learner_from_dict_dispatches_on_kind() -> None:
    learner = RandomGuessLearner(seed=3).fit(np.zeros((4, 2)), np.array([0, 1, 1, 1]))
    restored = learner_from_dict(learner.to_dict())
    assert isinstance(restored, RandomGuessLearner)
    assert restored.rate == 0.75
    with pytest.raises(SchemaError):
        learner_from_dict({"kind": "svm"})


def test_random_guess_is_seeded_and_binary() -> None:
    X = np.zeros((200, 1))
    learner = RandomGuessLearner(seed=5).fit(X, np.array([0, 1] * 100))
    first = learner.predict_proba(X)
    assert set(np.unique(first)) <= {0.0, 1.0}
    assert np.array_equal(first, learner.predict_proba(X))
    assert np.array_equal(learner.predict(X), first.astype(np.int64))
    assert 60 < first.sum() < 140


def test_named_grid_sizes() -> None:
    assert len(expand_grid(named_grid("full", "1:5"))) == 2025
    assert len(expand_grid(named_grid("full", "1:1"))) == 405
    assert len(expand_grid(named_grid("full", "1:10"))) == 2025
    starred = expand_grid(named_grid("starred"))
    assert starred == [
        {
            "max_depth": 8,
            "learning_rate": 0.3,
            "n_estimators": 100,
            "min_child_weight": 1,
            "subsample": 1.0,
            "scale_pos_weight": 1.0,
        }
    ]
    with pytest.raises(ConfigError):
        named_grid("coarse")
    with pytest.raises(ConfigError):
        named_grid("full", "3:1")
    with pytest.raises(ConfigError):
        expand_grid({"max_depth": ()})


def test_grid_order_varies_last_key_fastest() -> None:
    points = expand_grid({"a": (1, 2), "b": ("x", "y")})
    assert points == [{"a": 1, "b": "x"}, {"a": 1, "b": "y"}, {"a": 2, "b": "x"}, {"a": 2, "b": "y"}]


def test_grid_search_keeps_earliest_best() -> None:
    _ThresholdLearner.fits = []
    X = np.array([[0.0], [1.0], [2.0], [3.0]])
    y = np.array([0, 0, 1, 1])
    result = grid_search((X, y), (X, y), {"cut": (-1.0, 1.5, 1.2, 2.5)}, _ThresholdLearner())
    assert _ThresholdLearner.fits == [-1.0, 1.5, 1.2, 2.5]
    assert result.best == {"cut": 1.5}
    assert result.best_f1 == 1.0
    assert list(result.table()["val_f1"]) == [pytest.approx(2 / 3), 1.0, 1.0, pytest.approx(2 / 3)]
    with pytest.raises(ConfigError):
        grid_search((X, y), (X, y), {"cut": (0.0,)}, RandomGuessLearner())


def test_bow_encoder_uses_training_vocabulary() -> None:
    encoder = BowEncoder(vocab_size=2).fit(["rocket rocket launch", "rocket orbit", "launch"])
    assert encoder.vocabulary == ["launch", "rocket"]
    assert encoder.column_names() == ["BOW_launch", "BOW_rocket"]
    encoded = encoder.transform(["orbit", "rocket"])
    assert encoded.shape == (2, 2)
    assert np.all(encoded[0] == 0.0)
    assert encoded[1, 1] > 0.0
    assert bow_encode(["a rocket"]).shape[0] == 1
    with pytest.raises(RuntimeError):
        BowEncoder().transform(["x"])
    with pytest.raises(ValueError):
        BowEncoder(vocab_size=0)


def test_random_guess_f1_on_one_to_five_data() -> None:
    y = np.tile([1, 0, 0, 0, 0, 0], 20_000)
    X = np.zeros((y.size, 1))
    for seed in range(3):
        learner = RandomGuessLearner(seed=seed).fit(X, y)
        assert learner.rate == pytest.approx(1 / 6)
        assert f1(y, learner.predict(X)) == pytest.approx(0.167, abs=0.01)
