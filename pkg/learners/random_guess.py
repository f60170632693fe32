from __future__ import annotations

from typing import Any

import numpy as np

from core.learner import Learner


class RandomGuessLearner(Learner):
    """Labels a row positive with the training positive rate, from a seeded stream.

    predict_proba returns 0/1 draws so the shared 0.5 threshold reproduces them.
    """

    name = "random_guess"
    missing_policy = "ignored"

    def __init__(self, seed: int = 0) -> None:
        super().__init__()
        self.seed = seed
        self.rate = 0.5

    def fit(self, X, y, val=None) -> "RandomGuessLearner":
        y = np.asarray(y, dtype=np.float64)
        self.rate = float(y.mean()) if y.size else 0.5
        if not self.feature_names:
            self.feature_names = [f"f{i}" for i in range(np.asarray(X).shape[1])]
        return self

    def predict_proba(self, X: np.ndarray) -> np.ndarray:
        rng = np.random.default_rng(self.seed)
        return (rng.random(np.asarray(X).shape[0]) < self.rate).astype(np.float64)

    def to_dict(self) -> dict[str, Any]:
        return {"kind": "random_guess", "seed": self.seed, "rate": self.rate, "feature_names": self.feature_names}

    @classmethod
    def from_dict(cls, data: dict[str, Any]) -> "RandomGuessLearner":
        learner = cls(seed=int(data["seed"]))
        learner.rate = float(data["rate"])
        learner.feature_names = list(data.get("feature_names", []))
        return learner


def create_learner() -> Learner:
    return RandomGuessLearner()
