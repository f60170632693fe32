from __future__ import annotations

from core.features import HATE_LABELS
from scorers._keyword import LabelHitScorer, saturate
from textfeat.lexical import tokenize

TARGET_WORDS = frozenset({"you", "your", "yours", "yourself", "they", "them", "he", "she"})


class HateScorer(LabelHitScorer):
    """Aggressive and hateful likelihoods plus a targeting score.

    Targeting only counts @mentions and direct-address words when the post
    is already aggressive or hateful.
    """

    name = "hate"
    labels = HATE_LABELS
    lexicon_file = "hate.tsv"

    def score(self, text: str) -> tuple[float, ...]:
        hits = self.label_hits(text)
        aggressive = hits.get("aggressive", 0)
        hateful = hits.get("hateful", 0)
        targets = 0
        if aggressive or hateful:
            targets = sum(1 for t in text.split() if t.startswith("@"))
            targets += sum(1 for t in tokenize(text) if t in TARGET_WORDS)
        return (saturate(aggressive), saturate(hateful), saturate(targets))
