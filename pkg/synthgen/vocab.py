"""Token vocabularies for generated posts.

Topic tokens are made-up words, one disjoint block per hashtag. Valence
words come from the sentiment lexicon so generated text moves the sentiment
features; under ood_strict they are partitioned between hashtags too.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from core.errors import ConfigError
from synthgen.config import WorldConfig
from textfeat.lda import lda_tokens
from textfeat.sentiment import sentiment_lexicon

_ONSETS = ("b", "d", "f", "g", "k", "l", "m", "n", "p", "r", "s", "t", "v", "z")
_VOWELS = ("a", "e", "i", "o", "u")
_SYLLABLES = tuple(o + v for o in _ONSETS for v in _VOWELS)


def made_up_word(index: int) -> str:
    """Three-syllable word, unique per index below len(_SYLLABLES) ** 3."""
    n = len(_SYLLABLES)
    if not 0 <= index < n**3:
        raise ValueError(f"word index {index} out of range")
    a, rest = divmod(index, n * n)
    b, c = divmod(rest, n)
    return _SYLLABLES[a] + _SYLLABLES[b] + _SYLLABLES[c]


@dataclass(frozen=True)
class Vocabularies:
    topics: tuple[tuple[str, ...], ...]
    shared: tuple[str, ...]
    positive: tuple[tuple[str, ...], ...]
    negative: tuple[tuple[str, ...], ...]

    def tokens_of(self, h: int) -> set[str]:
        return set(self.topics[h]) | set(self.positive[h]) | set(self.negative[h])


def _valence_words() -> tuple[list[str], list[str]]:
    lexicon = sentiment_lexicon()
    usable = {w: v for w, v in lexicon.items() if lda_tokens(w) == [w]}
    positive = sorted(w for w, v in usable.items() if v > 0)
    negative = sorted(w for w, v in usable.items() if v < 0)
    return positive, negative


def _partition(words: list[str], parts: int, strict: bool, kind: str) -> tuple[tuple[str, ...], ...]:
    if not strict:
        return tuple(tuple(words) for _ in range(parts))
    if len(words) < parts:
        raise ConfigError(
            f"ood_strict needs one {kind} word per hashtag: {len(words)} available, {parts} hashtags"
        )
    return tuple(tuple(words[i::parts]) for i in range(parts))


def build_vocabularies(config: WorldConfig) -> Vocabularies:
    topics = tuple(
        tuple(made_up_word(h * config.vocab_size + i) for i in range(config.vocab_size))
        for h in range(config.n_hashtags)
    )
    offset = config.n_hashtags * config.vocab_size
    shared = () if config.ood_strict else tuple(
        made_up_word(offset + i) for i in range(config.shared_vocab_size)
    )
    positive, negative = _valence_words()
    return Vocabularies(
        topics=topics,
        shared=shared,
        positive=_partition(positive, config.n_hashtags, config.ood_strict, "positive"),
        negative=_partition(negative, config.n_hashtags, config.ood_strict, "negative"),
    )


def compose_text(
    vocab: Vocabularies,
    h: int,
    valence: int,
    n_tokens: int,
    shared_share: float,
    rng: np.random.Generator,
) -> str:
    """Space-joined tokens of hashtag h plus two valence words when valence != 0."""
    topic = vocab.topics[h]
    use_shared = rng.random(n_tokens) < shared_share
    picks = rng.integers(0, len(topic), size=n_tokens)
    shared_picks = rng.integers(0, max(len(vocab.shared), 1), size=n_tokens)
    words = [
        vocab.shared[s] if (flag and vocab.shared) else topic[p]
        for flag, p, s in zip(use_shared, picks, shared_picks)
    ]
    pool = vocab.positive[h] if valence > 0 else vocab.negative[h]
    valence_picks = rng.integers(0, len(pool), size=2)
    if valence != 0:
        words += [pool[i] for i in valence_picks]
    return " ".join(words)
