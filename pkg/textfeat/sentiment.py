"""Lexicon-and-rule sentiment scoring.

Valences come from `lexicons/sentiment.tsv`; intensity boosters, negation,
contrastive "but", all-caps emphasis and exclamation marks adjust them. The
summed valence is squashed by s / sqrt(s^2 + alpha).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import cache

from core.config import SENTIMENT_ALPHA, SENTIMENT_THRESHOLD
from textfeat.lexical import LEXICON_DIR, load_tsv_lexicon

B_INCR = 0.293
C_INCR = 0.733
N_SCALAR = -0.74
EXCLAMATION_INCR = 0.292
MAX_EXCLAMATIONS = 4

NEGATIONS = frozenset(
    {
        "not",
        "no",
        "never",
        "none",
        "nobody",
        "nothing",
        "neither",
        "nor",
        "nowhere",
        "cannot",
        "without",
        "aint",
        "dont",
        "doesnt",
        "didnt",
        "isnt",
        "wasnt",
        "wont",
        "cant",
        "couldnt",
        "shouldnt",
        "wouldnt",
    }
)

NEGATIVE, NEUTRAL, POSITIVE = 0, 1, 2

_PUNCT = "\"'`.,;:!?()[]{}<>*-_/\\|~"


@cache
def sentiment_lexicon() -> dict[str, float]:
    return {k: float(v) for k, v in load_tsv_lexicon(LEXICON_DIR / "sentiment.tsv").items()}


@cache
def booster_lexicon() -> dict[str, float]:
    return {k: float(v) for k, v in load_tsv_lexicon(LEXICON_DIR / "boosters.tsv").items()}


def normalize(score: float, alpha: float = SENTIMENT_ALPHA) -> float:
    value = score / math.sqrt(score * score + alpha)
    return max(-1.0, min(1.0, value))


def _is_negation(word: str) -> bool:
    return word in NEGATIONS or word.endswith("n't")


@dataclass(frozen=True)
class SentimentScores:
    neg: float
    neu: float
    pos: float
    compound: float
    main_label: int

    def as_tuple(self) -> tuple[float, float, float, float, float]:
        return (self.neg, self.neu, self.pos, self.compound, float(self.main_label))


class SentimentAnalyzer:
    def __init__(
        self,
        lexicon: dict[str, float] | None = None,
        boosters: dict[str, float] | None = None,
    ) -> None:
        self.lexicon = sentiment_lexicon() if lexicon is None else lexicon
        self.boosters = booster_lexicon() if boosters is None else boosters

    def _tokens(self, text: str) -> list[str]:
        out = []
        for raw in text.split():
            token = raw.strip(_PUNCT)
            if token:
                out.append(token)
        return out

    def valences(self, text: str) -> list[float]:
        tokens = self._tokens(text)
        lowered = [t.lower() for t in tokens]
        mixed_case = any(t.isupper() for t in tokens) and not all(t.isupper() for t in tokens)
        sentiments: list[float] = []
        for i, word in enumerate(lowered):
            if word in self.boosters:
                sentiments.append(0.0)
                continue
            valence = self.lexicon.get(word, 0.0)
            if valence == 0.0:
                sentiments.append(0.0)
                continue
            sign = 1.0 if valence > 0 else -1.0
            if mixed_case and tokens[i].isupper():
                valence += sign * C_INCR
            negated = False
            for back, damp in ((1, 1.0), (2, 0.95), (3, 0.9)):
                if i - back < 0:
                    break
                prev = lowered[i - back]
                if prev in self.boosters:
                    valence += sign * self.boosters[prev] * damp
                if _is_negation(prev):
                    negated = True
            if negated:
                valence *= N_SCALAR
            sentiments.append(valence)

        if "but" in lowered:
            pivot = lowered.index("but")
            sentiments = [
                s * 0.5 if i < pivot else (s * 1.5 if i > pivot else s)
                for i, s in enumerate(sentiments)
            ]
        return sentiments

    def polarity_scores(self, text: str) -> SentimentScores:
        sentiments = self.valences(text)
        if not sentiments:
            return SentimentScores(0.0, 1.0, 0.0, 0.0, NEUTRAL)

        total = float(sum(sentiments))
        emphasis = min(text.count("!"), MAX_EXCLAMATIONS) * EXCLAMATION_INCR
        if total > 0:
            total += emphasis
        elif total < 0:
            total -= emphasis
        compound = normalize(total) if total != 0.0 else 0.0

        pos_sum = sum(s + 1.0 for s in sentiments if s > 0)
        neg_sum = sum(s - 1.0 for s in sentiments if s < 0)
        neu_count = sum(1 for s in sentiments if s == 0)
        if pos_sum > abs(neg_sum):
            pos_sum += emphasis
        elif pos_sum < abs(neg_sum):
            neg_sum -= emphasis
        denom = pos_sum + abs(neg_sum) + neu_count
        pos = pos_sum / denom
        neg = abs(neg_sum) / denom
        neu = neu_count / denom

        if compound >= SENTIMENT_THRESHOLD:
            label = POSITIVE
        elif compound <= -SENTIMENT_THRESHOLD:
            label = NEGATIVE
        else:
            label = NEUTRAL
        return SentimentScores(neg, neu, pos, compound, label)


@cache
def default_analyzer() -> SentimentAnalyzer:
    return SentimentAnalyzer()


def sentiment_scores(text: str) -> tuple[float, float, float, float, int]:
    """(neg, neu, pos, compound, main_label) with labels 0 neg / 1 neu / 2 pos."""
    s = default_analyzer().polarity_scores(text)
    return (s.neg, s.neu, s.pos, s.compound, s.main_label)
