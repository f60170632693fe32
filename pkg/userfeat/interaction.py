"""Sender-recipient interaction features: mentions, latency, TORS and PathWidth."""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

from core.features import LDA_TOPICS
from core.maths import cosine_distance, seconds_to_days
from core.model import Instance, RawPost
from userfeat.history import HistorySummary

logger = logging.getLogger(__name__)

ParentAuthor = Callable[[RawPost], str | None]


def _no_parents(_post: RawPost) -> str | None:
    return None


@dataclass(frozen=True)
class InteractionResult:
    values: tuple[float, ...]
    zero_tors: bool


def _mention_share(summary: HistorySummary, target: str) -> float:
    if summary.size == 0:
        return math.nan
    return 100.0 * summary.posts_mentioning.get(target, 0) / summary.size


def tors_vector(
    sender: HistorySummary,
    recipient: HistorySummary,
    parent_author: ParentAuthor = _no_parents,
) -> np.ndarray:
    """Topic-weighted interaction strength between the two users, L1-normalised.

    Interaction posts are history posts of one side that mention the other or
    repost, quote or reply to one of the other side's posts.
    """
    total = np.zeros(LDA_TOPICS)
    for summary, other in ((sender, recipient.user_id), (recipient, sender.user_id)):
        for i, post in enumerate(summary.posts):
            if other in post.mentions or parent_author(post) == other:
                total += np.nan_to_num(summary.post_lda(i), nan=0.0)
    mass = total.sum()
    return total / mass if mass > 0 else total


def interaction_features(
    sender: HistorySummary,
    recipient: HistorySummary,
    instance: Instance,
    post_lda: np.ndarray,
    parent_author: ParentAuthor = _no_parents,
) -> InteractionResult:
    """16 values in dictionary order; latency is computed for both labels."""
    s_id, r_id = sender.user_id, recipient.user_id
    latency = seconds_to_days(instance.event_time - instance.post.created_at)
    tors = tors_vector(sender, recipient, parent_author)
    zero_tors = not tors.any()
    if zero_tors:
        logger.debug("instance %s: no sender-recipient interactions, PathWidth set to 1", instance.instance_id)
        path_width = 1.0
    else:
        path_width = cosine_distance(post_lda, tors)
    values = (
        float(recipient.mentions.get(s_id, 0)),
        _mention_share(recipient, s_id),
        float(sender.mentions.get(r_id, 0)),
        _mention_share(sender, r_id),
        latency,
        *(float(v) for v in tors),
        path_width,
    )
    return InteractionResult(values=values, zero_tors=zero_tors)
