from __future__ import annotations

from core.scorer import TextScorer
from scorers._keyword import weight_lexicon
from textfeat.lexical import tokenize


class SubjectivityScorer(TextScorer):
    """Mean subjectivity weight over hits, shrunk toward 0 for long factual posts."""

    name = "subjectivity"
    labels = ("subjectivity",)

    def score(self, text: str) -> tuple[float, ...]:
        lexicon = weight_lexicon("subjective.tsv")
        tokens = tokenize(text)
        hits = [lexicon[t] for t in tokens if t in lexicon]
        if not hits:
            return (0.0,)
        coverage = min(1.0, 4.0 * len(hits) / len(tokens))
        return (min(1.0, sum(hits) / len(hits) * coverage),)
