"""Crude stand-ins for word-level and post-level grammatical correctness."""

from __future__ import annotations

from core.scorer import TextScorer
from scorers._keyword import label_lexicon
from textfeat.lexical import familiar_words, stopwords, tokenize
from textfeat.sentiment import sentiment_lexicon

_LEXICON_FILES = (
    "topic_m.tsv",
    "topic_g.tsv",
    "emotion.tsv",
    "irony.tsv",
    "offensive.tsv",
    "hate.tsv",
    "masculinity.tsv",
    "emoji.tsv",
    "subjective.tsv",
)


def known_words() -> frozenset[str]:
    words = set(familiar_words()) | set(stopwords()) | set(sentiment_lexicon())
    for name in _LEXICON_FILES:
        words.update(label_lexicon(name))
    return frozenset(words)


class GrammarScorer(TextScorer):
    name = "grammar"
    labels = ("word_level", "post_level")

    def __init__(self) -> None:
        self._known = known_words()

    def score(self, text: str) -> tuple[float, ...]:
        tokens = [t for t in tokenize(text) if t.isalpha()]
        word_level = 1.0 if not tokens else sum(t in self._known for t in tokens) / len(tokens)

        stripped = text.strip()
        if not stripped:
            return (word_level, 0.0)
        post_level = 1.0
        if not stripped[0].isupper():
            post_level -= 0.25
        if stripped[-1] not in ".!?":
            post_level -= 0.25
        if any(a == b for a, b in zip(tokens, tokens[1:])):
            post_level -= 0.25
        if " i " in f" {stripped} ":
            post_level -= 0.25
        return (word_level, max(0.0, post_level))
