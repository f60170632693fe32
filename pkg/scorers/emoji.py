from __future__ import annotations

from collections import Counter

from core.scorer import TextScorer
from scorers._keyword import weight_lexicon
from textfeat.lexical import tokenize


class EmojiScorer(TextScorer):
    """Categorical emoji code: the most-hit emoji (ties to the lowest code), 0 for none."""

    name = "emoji"
    labels = ("emoji",)

    def score(self, text: str) -> tuple[float, ...]:
        lexicon = weight_lexicon("emoji.tsv")
        hits = Counter(int(lexicon[t]) for t in tokenize(text) if t in lexicon)
        if not hits:
            return (0.0,)
        best = max(hits.values())
        return (float(min(code for code, n in hits.items() if n == best)),)
