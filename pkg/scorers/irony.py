from __future__ import annotations

from scorers._keyword import WeightedHitScorer


class IronyScorer(WeightedHitScorer):
    name = "irony"
    labels = ("irony",)
    lexicon_file = "irony.tsv"
