"""Single-label emotion distribution; 'others' carries a unit baseline."""

from __future__ import annotations

from core.features import EMOTION_LABELS
from scorers._keyword import LabelHitScorer


class EmotionScorer(LabelHitScorer):
    name = "emotion"
    labels = EMOTION_LABELS
    lexicon_file = "emotion.tsv"

    def score(self, text: str) -> tuple[float, ...]:
        hits = self.label_hits(text)
        weights = [float(hits.get(label, 0)) for label in self.labels]
        weights[self.labels.index("others")] += 1.0
        total = sum(weights)
        return tuple(w / total for w in weights)
