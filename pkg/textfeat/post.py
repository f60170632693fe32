"""Assembly of the 78 post-content (M) features."""

from __future__ import annotations

import zlib
from dataclasses import dataclass
from typing import Iterable

import numpy as np

from core.config import HATE_THRESHOLD, TOPIC_LIKELIHOOD_THRESHOLD, UNKNOWN_HASHTAG_CODE
from core.features import schema_size
from core.model import FeatureVector, RawPost
from scorers import ScorerRegistry
from textfeat.lda import TopicModel, lda_infer
from textfeat.lexical import lexical_stats
from textfeat.readability import readability_scores
from textfeat.sentiment import sentiment_scores

M_SIZE = schema_size("M")
LDA_OFFSET = 19 + 2 + 6 + 2


@dataclass(frozen=True)
class HashtagVocab:
    """Persisted hashtag codes: 0 is reserved for unknown, known tags from 1."""

    tags: tuple[str, ...]

    @classmethod
    def build(cls, hashtags: Iterable[str]) -> "HashtagVocab":
        return cls(tuple(sorted({h.lower() for h in hashtags})))

    def code(self, hashtag: str | None) -> int:
        if hashtag is None:
            return UNKNOWN_HASHTAG_CODE
        try:
            return self.tags.index(hashtag.lower()) + 1
        except ValueError:
            return UNKNOWN_HASHTAG_CODE

    def to_list(self) -> list[str]:
        return list(self.tags)


def argmax_code(values: Iterable[float]) -> int:
    """Index of the largest value; ties go to the lowest index."""
    arr = np.asarray(list(values), dtype=np.float64)
    return int(np.argmax(arr))


def text_seed(text: str) -> int:
    return zlib.crc32(text.encode("utf-8"))


def lda_vector(text: str, topic_model: TopicModel) -> np.ndarray:
    return lda_infer(topic_model, text, seed=text_seed(text))


def post_feature_array(
    post: RawPost,
    topic_model: TopicModel,
    registry: ScorerRegistry,
    hashtag_vocab: HashtagVocab,
    hashtag: str | None = None,
) -> np.ndarray:
    text = post.text
    values: list[float] = []

    topic_m = registry.get("topic_m")(text)
    values += topic_m
    values += [argmax_code(topic_m), sum(1 for p in topic_m if p > TOPIC_LIKELIHOOD_THRESHOLD)]
    topic_g = registry.get("topic_g")(text)
    values += topic_g
    values += [argmax_code(topic_g), sum(1 for p in topic_g if p > TOPIC_LIKELIHOOD_THRESHOLD)]
    values += lda_vector(text, topic_model).tolist()

    char_count, word_count = lexical_stats(text)
    values += [char_count, word_count]
    values += registry.get("grammar")(text)
    values += registry.get("polarity")(text)
    values += registry.get("subjectivity")(text)
    values += registry.get("irony")(text)
    values += registry.get("offensive")(text)
    values += registry.get("emoji")(text)
    values += registry.get("masculinity")(text)

    values += readability_scores(text)

    neg, neu, pos, compound, label = sentiment_scores(text)
    values += [neg, neu, pos, compound, label]

    emotion = registry.get("emotion")(text)
    values += emotion
    values.append(argmax_code(emotion))

    hate = registry.get("hate")(text)
    values += hate
    values.append(sum(1 for p in hate if p > HATE_THRESHOLD))

    tag = hashtag if hashtag is not None else post.primary_hashtag
    values.append(hashtag_vocab.code(tag))

    out = np.asarray(values, dtype=np.float64)
    if out.shape[0] != M_SIZE:
        raise ValueError(f"post feature assembly produced {out.shape[0]} values, expected {M_SIZE}")
    return out


def post_features(
    post: RawPost,
    topic_model: TopicModel,
    registry: ScorerRegistry,
    hashtag_vocab: HashtagVocab,
    hashtag: str | None = None,
) -> FeatureVector:
    """The M vector of one post, ordered as feature_dictionary('M')."""
    return FeatureVector.from_array(
        "M", post_feature_array(post, topic_model, registry, hashtag_vocab, hashtag)
    )


def lda_part(m_vector: np.ndarray) -> np.ndarray:
    """The 10 LDA components inside an M vector (or a stack of them)."""
    return np.asarray(m_vector)[..., LDA_OFFSET : LDA_OFFSET + 10]
