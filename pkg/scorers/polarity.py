from __future__ import annotations

from core.scorer import TextScorer
from textfeat.lexical import tokenize
from textfeat.sentiment import sentiment_lexicon


class PolarityScorer(TextScorer):
    """Mean lexicon valence of the hits rescaled to [-1, 1]; 0 with no hits."""

    name = "polarity"
    labels = ("polarity",)

    def score(self, text: str) -> tuple[float, ...]:
        lexicon = sentiment_lexicon()
        hits = [lexicon[t] for t in tokenize(text) if t in lexicon]
        if not hits:
            return (0.0,)
        return (max(-1.0, min(1.0, sum(hits) / len(hits) / 4.0)),)
