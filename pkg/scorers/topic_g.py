from __future__ import annotations

from core.features import TOPIC_G_LABELS
from scorers._keyword import LabelHitScorer


class TopicGScorer(LabelHitScorer):
    """6-topic multi-label likelihoods."""

    name = "topic_g"
    labels = TOPIC_G_LABELS
    lexicon_file = "topic_g.tsv"
