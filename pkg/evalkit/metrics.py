"""F1 and the mixture aggregation of per-group fold scores."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Any, Sequence

import numpy as np
from sklearn.metrics import f1_score


def f1(labels: Sequence[int] | np.ndarray, predictions: Sequence[int] | np.ndarray) -> float:
    """F1 on the positive class; 0.0 when precision + recall = 0."""
    y = np.asarray(labels, dtype=np.int64)
    p = np.asarray(predictions, dtype=np.int64)
    if y.size == 0:
        raise ValueError("f1 needs at least one instance")
    if y.shape != p.shape:
        raise ValueError(f"{y.size} labels but {p.size} predictions")
    if not (np.isin(y, (0, 1)).all() and np.isin(p, (0, 1)).all()):
        raise ValueError("labels and predictions must be 0 or 1")
    return float(f1_score(y, p, pos_label=1, zero_division=0))


@dataclass(frozen=True)
class FoldScores:
    """Per-fold F1 of one group; sigma uses the population convention."""

    group: str
    folds: tuple[float, ...]

    def __post_init__(self) -> None:
        if not self.folds:
            raise ValueError(f"group {self.group!r} has no fold scores")
        for value in self.folds:
            if not 0.0 <= value <= 1.0:
                raise ValueError(f"group {self.group!r}: F1 {value} outside [0, 1]")

    @property
    def mu(self) -> float:
        return float(np.mean(self.folds))

    @property
    def sigma(self) -> float:
        return float(np.std(self.folds))

    def to_dict(self) -> dict[str, Any]:
        return {"group": self.group, "mu": self.mu, "sigma": self.sigma, "folds": list(self.folds)}


def aggregate(per_group: Sequence[tuple[float, float]]) -> tuple[float, float]:
    """Mean and standard deviation of an equally weighted mixture of groups.

    mu = mean(mu_i); sigma = sqrt(mean(sigma_i^2) + mean((mu_i - mu)^2)).
    """
    if not per_group:
        raise ValueError("aggregate needs at least one group")
    mus = np.asarray([m for m, _ in per_group], dtype=np.float64)
    sigmas = np.asarray([s for _, s in per_group], dtype=np.float64)
    mu = float(mus.mean())
    var = float(np.mean(sigmas**2) + np.mean((mus - mu) ** 2))
    return mu, math.sqrt(max(var, 0.0))


def aggregate_scores(groups: Sequence[FoldScores]) -> tuple[float, float]:
    return aggregate([(g.mu, g.sigma) for g in groups])
