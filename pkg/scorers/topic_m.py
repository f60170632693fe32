from __future__ import annotations

from core.features import TOPIC_M_LABELS
from scorers._keyword import LabelHitScorer


class TopicMScorer(LabelHitScorer):
    """19-topic multi-label likelihoods."""

    name = "topic_m"
    labels = TOPIC_M_LABELS
    lexicon_file = "topic_m.tsv"
