from __future__ import annotations

import math

from scorers._keyword import WeightedHitScorer


class MasculinityScorer(WeightedHitScorer):
    """Logistic of signed style weights; 0.5 when no style marker is present."""

    name = "masculinity"
    labels = ("masculinity",)
    lexicon_file = "masculinity.tsv"

    def score(self, text: str) -> tuple[float, ...]:
        return (1.0 / (1.0 + math.exp(-self.evidence(text))),)
