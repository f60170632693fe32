"""Readability measures computed from fixed text counts.

Counting rules (every formula depends on them):

- words: whitespace tokens with leading/trailing punctuation stripped,
  kept only if they contain a letter
- letters: alphanumeric characters of the kept words
- syllables: vowel groups [aeiouy]+ of the lowercased ASCII letters; a
  trailing silent "e" (but not "le") is dropped when the word has more than
  one group; every word has at least one syllable
- sentences: pieces split on runs of [.!?] followed by whitespace or end
  of text; at least one sentence when there is at least one word
- polysyllables: words with three or more syllables
- long words: words with more than six letters
- unfamiliar words: words absent from the built-in familiar-word list
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass

from textfeat.lexical import familiar_words

_SENTENCE_SPLIT_RE = re.compile(r"[.!?]+(?=\s|$)")
_VOWEL_GROUP_RE = re.compile(r"[aeiouy]+")
_STRIP_CHARS = "\"'`.,;:!?()[]{}<>«»“”‘’-_*/\\|~^…"


def count_syllables(word: str) -> int:
    letters = "".join(ch for ch in word.lower() if "a" <= ch <= "z")
    if not letters:
        return 1
    groups = len(_VOWEL_GROUP_RE.findall(letters))
    if groups > 1 and letters.endswith("e") and not letters.endswith("le"):
        groups -= 1
    return max(1, groups)


def split_words(text: str) -> list[str]:
    words = []
    for token in text.split():
        clean = token.strip(_STRIP_CHARS)
        if any(ch.isalpha() for ch in clean):
            words.append(clean)
    return words


def count_sentences(text: str, n_words: int) -> int:
    if n_words == 0:
        return 0
    pieces = [p for p in _SENTENCE_SPLIT_RE.split(text.strip()) if any(ch.isalnum() for ch in p)]
    return max(1, len(pieces))


@dataclass(frozen=True)
class TextCounts:
    words: int
    sentences: int
    syllables: int
    letters: int
    polysyllables: int
    long_words: int
    unfamiliar: int


def text_counts(text: str) -> TextCounts:
    words = split_words(text)
    familiar = familiar_words()
    syllables = [count_syllables(w) for w in words]
    return TextCounts(
        words=len(words),
        sentences=count_sentences(text, len(words)),
        syllables=sum(syllables),
        letters=sum(sum(1 for ch in w if ch.isalnum()) for w in words),
        polysyllables=sum(1 for s in syllables if s >= 3),
        long_words=sum(1 for w in words if sum(1 for ch in w if ch.isalpha()) > 6),
        unfamiliar=sum(1 for w in words if w.lower() not in familiar),
    )


def kincaid(c: TextCounts) -> float:
    return 0.39 * c.words / c.sentences + 11.8 * c.syllables / c.words - 15.59


def automated_readability_index(c: TextCounts) -> float:
    return 4.71 * c.letters / c.words + 0.5 * c.words / c.sentences - 21.43


def coleman_liau(c: TextCounts) -> float:
    letters_per_100 = 100.0 * c.letters / c.words
    sentences_per_100 = 100.0 * c.sentences / c.words
    return 0.0588 * letters_per_100 - 0.296 * sentences_per_100 - 15.8


def flesch_reading_ease(c: TextCounts) -> float:
    return 206.835 - 1.015 * c.words / c.sentences - 84.6 * c.syllables / c.words


def gunning_fog(c: TextCounts) -> float:
    return 0.4 * (c.words / c.sentences + 100.0 * c.polysyllables / c.words)


def smog(c: TextCounts) -> float:
    return 1.0430 * math.sqrt(c.polysyllables * 30.0 / c.sentences) + 3.1291


def lix(c: TextCounts) -> float:
    return c.words / c.sentences + 100.0 * c.long_words / c.words


def rix(c: TextCounts) -> float:
    return c.long_words / c.sentences


def dale_chall(c: TextCounts) -> float:
    pct = 100.0 * c.unfamiliar / c.words
    score = 0.1579 * pct + 0.0496 * c.words / c.sentences
    if pct > 5.0:
        score += 3.6365
    return score


FORMULAS = (
    kincaid,
    automated_readability_index,
    coleman_liau,
    flesch_reading_ease,
    gunning_fog,
    smog,
    lix,
    rix,
    dale_chall,
)


def readability_from_counts(c: TextCounts) -> tuple[float, ...]:
    if c.words == 0 or c.sentences == 0:
        return (math.nan,) * len(FORMULAS) + (0.0, 0.0)
    return tuple(f(c) for f in FORMULAS) + (float(c.polysyllables), float(c.unfamiliar))


def readability_scores(text: str) -> tuple[float, ...]:
    """Nine readability formulas plus polysyllable and unfamiliar-word counts."""
    return readability_from_counts(text_counts(text))
