"""Small numeric helpers: cosine measures, logistic functions, time spans."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from core.config import SECONDS_PER_DAY


def seconds_to_days(seconds: float) -> float:
    return float(seconds) / SECONDS_PER_DAY


def sigmoid(x):
    """Numerically stable logistic for scalars or arrays."""
    arr = np.asarray(x, dtype=np.float64)
    out = np.empty_like(arr)
    pos = arr >= 0
    out[pos] = 1.0 / (1.0 + np.exp(-arr[pos]))
    ex = np.exp(arr[~pos])
    out[~pos] = ex / (1.0 + ex)
    if out.ndim == 0:
        return float(out)
    return out


def logit(p: float, eps: float = 1e-6) -> float:
    p = min(1.0 - eps, max(eps, float(p)))
    return math.log(p / (1.0 - p))


def cosine_similarity(a: np.ndarray, b: np.ndarray) -> float:
    """Cosine similarity; NaN when either vector has zero norm."""
    a = np.asarray(a, dtype=np.float64)
    b = np.asarray(b, dtype=np.float64)
    na = float(np.linalg.norm(a))
    nb = float(np.linalg.norm(b))
    if na == 0.0 or nb == 0.0:
        return math.nan
    if math.isnan(na) or math.isnan(nb):
        return math.nan
    value = float(np.dot(a, b) / (na * nb))
    return max(-1.0, min(1.0, value))


def cosine_distance(a: np.ndarray, b: np.ndarray) -> float:
    """1 - cosine similarity with NaN entries read as 0.

    Two zero vectors are at distance 0; a zero vector against a non-zero one
    is at distance 1.
    """
    a = np.nan_to_num(np.asarray(a, dtype=np.float64), nan=0.0)
    b = np.nan_to_num(np.asarray(b, dtype=np.float64), nan=0.0)
    na = float(np.linalg.norm(a))
    nb = float(np.linalg.norm(b))
    if na == 0.0 and nb == 0.0:
        return 0.0
    if na == 0.0 or nb == 0.0:
        return 1.0
    sim = float(np.dot(a, b) / (na * nb))
    return 1.0 - max(-1.0, min(1.0, sim))


def cosine_distances_to(anchor: np.ndarray, rows: np.ndarray) -> np.ndarray:
    """Row-wise cosine_distance(anchor, rows[i])."""
    anchor = np.nan_to_num(np.asarray(anchor, dtype=np.float64), nan=0.0)
    rows = np.nan_to_num(np.atleast_2d(np.asarray(rows, dtype=np.float64)), nan=0.0)
    na = float(np.linalg.norm(anchor))
    nr = np.linalg.norm(rows, axis=1)
    out = np.ones(rows.shape[0], dtype=np.float64)
    if na == 0.0:
        out[nr == 0.0] = 0.0
        return out
    ok = nr > 0.0
    sims = rows[ok] @ anchor / (nr[ok] * na)
    out[ok] = 1.0 - np.clip(sims, -1.0, 1.0)
    return out


def safe_div(num: float, den: float) -> float:
    return float(num) / float(den) if den else math.nan


@dataclass(frozen=True)
class TimeSpan:
    """Closed-open interval [start, end) of epoch seconds."""

    start: int
    end: int

    @classmethod
    def before(cls, t: int, length: int) -> "TimeSpan":
        return cls(t - length, t)

    @property
    def length(self) -> int:
        return self.end - self.start

    def contains(self, t: int) -> bool:
        return self.start <= t < self.end
