"""Pairwise Pearson screening of a feature matrix."""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from typing import Any, Sequence

import numpy as np
import pandas as pd

from core.config import COLLINEARITY_THRESHOLD

logger = logging.getLogger(__name__)

MIN_ROWS = 3


@dataclass
class CollinearityResult:
    fraction: float
    above: int
    defined_pairs: int
    undefined_pairs: int
    threshold: float
    pairs: list[tuple[str, str, float]] = field(default_factory=list)

    def to_dict(self) -> dict[str, Any]:
        return {
            "fraction": self.fraction,
            "above": self.above,
            "defined_pairs": self.defined_pairs,
            "undefined_pairs": self.undefined_pairs,
            "threshold": self.threshold,
            "pairs": [{"a": a, "b": b, "r": r} for a, b, r in self.pairs],
        }


def collinearity_screen(
    X: np.ndarray | pd.DataFrame,
    threshold: float = COLLINEARITY_THRESHOLD,
    names: Sequence[str] | None = None,
) -> CollinearityResult:
    """Fraction of unordered feature pairs with |r| > threshold.

    NaNs are deleted pairwise. Pairs whose correlation is undefined (a
    constant column after deletion, or fewer than three shared rows) are
    excluded from the fraction and counted separately.
    """
    frame = X if isinstance(X, pd.DataFrame) else pd.DataFrame(np.asarray(X, dtype=np.float64))
    if names is not None:
        frame = frame.set_axis(list(names), axis=1)
    if frame.shape[1] < 2 or frame.shape[0] < MIN_ROWS:
        raise ValueError(
            f"collinearity screening needs >= 2 features and >= {MIN_ROWS} rows, got shape {frame.shape}"
        )
    with np.errstate(divide="ignore", invalid="ignore"):
        corr = frame.corr(method="pearson", min_periods=MIN_ROWS).to_numpy()
    columns = [str(c) for c in frame.columns]
    iu, ju = np.triu_indices(len(columns), k=1)
    r = corr[iu, ju]
    defined = ~np.isnan(r)
    hits = defined & (np.abs(r) > threshold)
    n_defined = int(defined.sum())
    n_undefined = int((~defined).sum())
    if n_undefined:
        logger.warning("%d feature pairs have an undefined correlation and were excluded", n_undefined)
    pairs = [(columns[i], columns[j], float(corr[i, j])) for i, j in zip(iu[hits], ju[hits])]
    fraction = len(pairs) / n_defined if n_defined else 0.0
    return CollinearityResult(
        fraction=fraction,
        above=len(pairs),
        defined_pairs=n_defined,
        undefined_pairs=n_undefined,
        threshold=threshold,
        pairs=pairs,
    )
