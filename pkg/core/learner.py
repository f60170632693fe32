"""Learner interface shared by every classifier family."""

from __future__ import annotations

from abc import ABC, abstractmethod
from typing import Any

import numpy as np


class Learner(ABC):
    """Binary classifier over a fixed, named feature matrix.

    Contract:
    - fit(X, y, val=None) trains in place and returns self
    - predict_proba(X) returns P(label = 1) per row, in [0, 1]
    - to_dict()/from_dict() round-trip the trained state as JSON-safe data
    - missing_policy names how NaN inputs are handled
    """

    name: str = "learner"
    missing_policy: str = "unspecified"

    def __init__(self) -> None:
        self.feature_names: list[str] = []

    @abstractmethod
    def fit(
        self,
        X: np.ndarray,
        y: np.ndarray,
        val: tuple[np.ndarray, np.ndarray] | None = None,
    ) -> "Learner":
        raise NotImplementedError

    @abstractmethod
    def predict_proba(self, X: np.ndarray) -> np.ndarray:
        raise NotImplementedError

    def predict(self, X: np.ndarray, threshold: float = 0.5) -> np.ndarray:
        return (self.predict_proba(X) >= threshold).astype(np.int64)

    def feature_importance(self) -> dict[str, float]:
        return {}

    @abstractmethod
    def to_dict(self) -> dict[str, Any]:
        raise NotImplementedError

    @classmethod
    @abstractmethod
    def from_dict(cls, data: dict[str, Any]) -> "Learner":
        raise NotImplementedError
