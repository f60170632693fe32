"""Shared keyword-lexicon machinery for the built-in scorers."""

from __future__ import annotations

import math
from collections import Counter
from functools import cache
from pathlib import Path

from core.scorer import TextScorer
from textfeat.lexical import load_tsv_lexicon, tokenize

LEXICON_DIR = Path(__file__).resolve().parent / "lexicons"


@cache
def label_lexicon(filename: str) -> dict[str, str]:
    return load_tsv_lexicon(LEXICON_DIR / filename)


@cache
def weight_lexicon(filename: str) -> dict[str, float]:
    return {k: float(v) for k, v in load_tsv_lexicon(LEXICON_DIR / filename).items()}


def saturate(hits: float) -> float:
    """Map a non-negative evidence count to a likelihood in [0, 1)."""
    return 1.0 - math.exp(-max(0.0, hits))


class LabelHitScorer(TextScorer):
    """Independent per-label likelihoods from keyword hit counts."""

    lexicon_file: str = ""

    def label_hits(self, text: str) -> Counter[str]:
        lexicon = label_lexicon(self.lexicon_file)
        return Counter(lexicon[t] for t in tokenize(text) if t in lexicon)

    def score(self, text: str) -> tuple[float, ...]:
        hits = self.label_hits(text)
        return tuple(saturate(hits.get(label, 0)) for label in self.labels)


class WeightedHitScorer(TextScorer):
    """A single likelihood from summed keyword weights."""

    lexicon_file: str = ""

    def evidence(self, text: str) -> float:
        lexicon = weight_lexicon(self.lexicon_file)
        return sum(lexicon[t] for t in tokenize(text) if t in lexicon)

    def score(self, text: str) -> tuple[float, ...]:
        return (saturate(self.evidence(text)),)
