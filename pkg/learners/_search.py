"""Exhaustive hyperparameter search scored by validation F1."""

from __future__ import annotations

import itertools
import logging
from dataclasses import dataclass
from typing import Any, Mapping, Sequence

import numpy as np
import pandas as pd

from core.errors import ConfigError
from core.learner import Learner
from evalkit.metrics import f1

logger = logging.getLogger(__name__)

Grid = Mapping[str, Sequence[Any]]

# Canonical order; the first key varies slowest.
_FULL_GRID: dict[str, tuple[Any, ...]] = {
    "max_depth": (6, 7, 8, 9, 10),
    "learning_rate": (0.3, 0.35, 0.4),
    "n_estimators": (100, 150, 200),
    "min_child_weight": (1, 2, 3),
    "subsample": (0.8, 0.9, 1.0),
}
_STARRED_GRID: dict[str, tuple[Any, ...]] = {
    "max_depth": (8,),
    "learning_rate": (0.3,),
    "n_estimators": (100,),
    "min_child_weight": (1,),
    "subsample": (1.0,),
    "scale_pos_weight": (1.0,),
}
_POS_WEIGHTS: dict[str, tuple[float, ...]] = {
    "1:1": (1.0,),
    "1:5": (1.0, 2.0, 3.0, 4.0, 5.0),
    "general-1:5": (1.0, 2.0, 3.0, 4.0, 5.0),
    "1:10": (1.0, 3.25, 5.5, 7.75, 10.0),
}
GRID_NAMES = ("full", "starred")


def named_grid(name: str, ratio_tag: str = "1:1") -> dict[str, tuple[Any, ...]]:
    """The searched-values grid (`full`) or its most frequently chosen point (`starred`)."""
    if name == "starred":
        return dict(_STARRED_GRID)
    if name != "full":
        raise ConfigError(f"unknown grid {name!r}; expected one of {', '.join(GRID_NAMES)}")
    if ratio_tag not in _POS_WEIGHTS:
        raise ConfigError(f"unknown ratio tag {ratio_tag!r}")
    grid = dict(_FULL_GRID)
    grid["scale_pos_weight"] = _POS_WEIGHTS[ratio_tag]
    return grid


def expand_grid(grid: Grid) -> list[dict[str, Any]]:
    keys = list(grid)
    for key in keys:
        if len(grid[key]) == 0:
            raise ConfigError(f"grid axis {key!r} has no values")
    return [dict(zip(keys, combo)) for combo in itertools.product(*(grid[k] for k in keys))]


@dataclass
class SearchResult:
    best: dict[str, Any]
    best_f1: float
    rows: list[dict[str, Any]]

    def table(self) -> pd.DataFrame:
        return pd.DataFrame(self.rows)


def grid_search(
    train: tuple[np.ndarray, np.ndarray],
    val: tuple[np.ndarray, np.ndarray],
    grid: Grid,
    learner: Learner,
    feature_names: list[str] | None = None,
) -> SearchResult:
    """Fit `learner.with_params(**point)` for every grid point and keep the best.

    The best point maximises validation F1; ties keep the earliest point in
    canonical grid order.
    """
    points = expand_grid(grid)
    if not points:
        raise ConfigError("grid is empty")
    if not hasattr(learner, "with_params"):
        raise ConfigError(f"learner {learner.name!r} has no tunable parameters")
    X_val, y_val = val
    rows: list[dict[str, Any]] = []
    best_idx = 0
    best_score = -1.0
    for idx, point in enumerate(points):
        candidate = learner.with_params(**point)
        if feature_names is not None:
            candidate.feature_names = list(feature_names)
        candidate.fit(train[0], train[1], val=val)
        score = f1(y_val, candidate.predict(X_val))
        rows.append({**point, "val_f1": score})
        if score > best_score:
            best_idx, best_score = idx, score
        logger.debug("grid point %d/%d %s -> F1 %.4f", idx + 1, len(points), point, score)
    logger.info("grid search: %d points, best F1 %.4f at %s", len(points), best_score, points[best_idx])
    return SearchResult(best=dict(points[best_idx]), best_f1=best_score, rows=rows)
