"""Per-user history aggregates and the activity / popularity features."""

from __future__ import annotations

import math
import warnings
from collections import Counter
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from core.config import SECONDS_PER_DAY
from core.model import POST_TYPE_ORDER, PostType, RawPost
from textfeat.post import M_SIZE, lda_part


def activity_features(history: Sequence[RawPost]) -> tuple[float, ...]:
    """(size, four type percentages, interactive percentage, mean interval in days)."""
    n = len(history)
    if n == 0:
        return (0.0,) + (math.nan,) * 6
    counts = Counter(p.post_type for p in history)
    percentages = [100.0 * counts.get(t, 0) / n for t in POST_TYPE_ORDER]
    interactive = 100.0 * (n - counts.get(PostType.ORIGINAL, 0)) / n
    if n > 1:
        times = sorted(p.created_at for p in history)
        interval = (times[-1] - times[0]) / (n - 1) / SECONDS_PER_DAY
    else:
        interval = math.nan
    return (float(n), *percentages, interactive, interval)


def popularity_features(history: Sequence[RawPost]) -> tuple[float, ...]:
    """Mean received reposts, quotes, replies and likes."""
    if not history:
        return (math.nan,) * 4
    totals = np.array([p.metrics.as_tuple() for p in history], dtype=np.float64)
    return tuple(float(v) for v in totals.mean(axis=0))


@dataclass(frozen=True)
class HistorySummary:
    """Cached aggregates of one user's (possibly truncated) history."""

    user_id: str
    posts: tuple[RawPost, ...]
    activity: tuple[float, ...]
    popularity: tuple[float, ...]
    mentions: Counter[str]
    posts_mentioning: Counter[str]
    post_m: np.ndarray = field(repr=False)

    @classmethod
    def build(cls, user_id: str, posts: Sequence[RawPost], post_m: np.ndarray) -> "HistorySummary":
        posts = tuple(posts)
        post_m = np.asarray(post_m, dtype=np.float64).reshape(len(posts), M_SIZE)
        mentions: Counter[str] = Counter()
        posts_mentioning: Counter[str] = Counter()
        for post in posts:
            mentions.update(post.mentions)
            posts_mentioning.update(set(post.mentions))
        post_m.setflags(write=False)
        return cls(
            user_id=user_id,
            posts=posts,
            activity=activity_features(posts),
            popularity=popularity_features(posts),
            mentions=mentions,
            posts_mentioning=posts_mentioning,
            post_m=post_m,
        )

    @property
    def size(self) -> int:
        return len(self.posts)

    @property
    def type_percentages(self) -> tuple[float, ...]:
        return self.activity[1:5]

    @property
    def mean_m(self) -> np.ndarray:
        if self.size == 0:
            return np.full(M_SIZE, math.nan)
        with warnings.catch_warnings():
            warnings.simplefilter("ignore", category=RuntimeWarning)
            return np.nanmean(self.post_m, axis=0)

    @property
    def mean_lda(self) -> np.ndarray:
        return lda_part(self.mean_m)

    def post_lda(self, index: int) -> np.ndarray:
        return lda_part(self.post_m[index])
