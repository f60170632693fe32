from __future__ import annotations

from scorers._keyword import WeightedHitScorer


class OffensiveScorer(WeightedHitScorer):
    name = "offensive"
    labels = ("offensive",)
    lexicon_file = "offensive.tsv"
