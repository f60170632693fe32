"""Historical-post (U-HM) features: both users' mean M vectors and their topic similarity."""

from __future__ import annotations

import math

import numpy as np

from core.maths import cosine_similarity
from userfeat.history import HistorySummary


def historical_post_features(sender: HistorySummary, recipient: HistorySummary) -> np.ndarray:
    s_mean = sender.mean_m
    r_mean = recipient.mean_m
    if sender.size == 0 or recipient.size == 0:
        similarity = math.nan
    else:
        similarity = cosine_similarity(sender.mean_lda, recipient.mean_lda)
    return np.concatenate([s_mean, r_mean, [similarity]])
