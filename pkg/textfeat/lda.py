"""Latent Dirichlet allocation by collapsed Gibbs sampling."""

from __future__ import annotations

import logging
from dataclasses import dataclass
from typing import Any, Sequence

import numpy as np

from core.config import LDA_BETA, LDA_INFER_SWEEPS, LDA_SEED, LDA_TOPICS, LDA_TRAIN_SWEEPS
from core.errors import ConfigError
from textfeat.lexical import stopwords, tokenize

logger = logging.getLogger(__name__)


def lda_tokens(text: str) -> list[str]:
    stop = stopwords()
    return [t for t in tokenize(text) if len(t) > 1 and t not in stop]


@dataclass(frozen=True)
class TopicModel:
    K: int
    vocabulary: dict[str, int]
    topic_word: np.ndarray
    alpha: float
    beta: float

    def __post_init__(self) -> None:
        if self.topic_word.shape != (self.K, len(self.vocabulary)):
            raise ValueError(
                f"topic_word shape {self.topic_word.shape} does not match K={self.K}, "
                f"V={len(self.vocabulary)}"
            )
        self.topic_word.setflags(write=False)

    def top_words(self, k: int, n: int = 10) -> list[str]:
        inverse = sorted(self.vocabulary, key=self.vocabulary.__getitem__)
        order = np.argsort(-self.topic_word[k], kind="stable")[:n]
        return [inverse[i] for i in order]

    def to_dict(self) -> dict[str, Any]:
        inverse = sorted(self.vocabulary, key=self.vocabulary.__getitem__)
        return {
            "K": self.K,
            "alpha": self.alpha,
            "beta": self.beta,
            "vocabulary": inverse,
            "topic_word": self.topic_word.tolist(),
        }

    @classmethod
    def from_dict(cls, data: dict[str, Any]) -> "TopicModel":
        vocab = {w: i for i, w in enumerate(data["vocabulary"])}
        return cls(
            K=int(data["K"]),
            vocabulary=vocab,
            topic_word=np.asarray(data["topic_word"], dtype=np.float64).reshape(int(data["K"]), len(vocab)),
            alpha=float(data["alpha"]),
            beta=float(data["beta"]),
        )


@dataclass(frozen=True)
class LDAParams:
    """Training settings of the topic model behind the TopicLDA features."""

    K: int = LDA_TOPICS
    alpha: float | None = None
    beta: float = LDA_BETA
    iters: int = LDA_TRAIN_SWEEPS
    seed: int = LDA_SEED

    def __post_init__(self) -> None:
        if self.K != LDA_TOPICS:
            raise ConfigError(f"the feature dictionary has {LDA_TOPICS} LDA topics, got K={self.K}")
        if self.beta <= 0 or (self.alpha is not None and self.alpha <= 0):
            raise ConfigError("LDA alpha and beta must be positive")
        if self.iters < 1:
            raise ConfigError(f"LDA needs at least one sweep, got {self.iters}")

    @classmethod
    def from_dict(cls, data: dict[str, Any]) -> "LDAParams":
        known = {"K", "alpha", "beta", "iters", "seed"}
        unknown = sorted(set(data) - known)
        if unknown:
            raise ConfigError(f"unknown LDA settings: {', '.join(unknown)}")
        return cls(**data)

    def to_dict(self) -> dict[str, Any]:
        return {"K": self.K, "alpha": self.alpha, "beta": self.beta, "iters": self.iters, "seed": self.seed}


def _draw(weights: np.ndarray, u: float) -> int:
    cumulative = np.cumsum(weights)
    k = int(np.searchsorted(cumulative, u * cumulative[-1], side="right"))
    return min(k, weights.shape[0] - 1)


def lda_train(
    corpus_texts: Sequence[str],
    K: int = LDA_TOPICS,
    alpha: float | None = None,
    beta: float = LDA_BETA,
    iters: int = LDA_TRAIN_SWEEPS,
    seed: int = LDA_SEED,
) -> TopicModel:
    """Fit K topics; deterministic for a fixed seed."""
    if K < 1:
        raise ValueError(f"K must be >= 1, got {K}")
    if not corpus_texts:
        raise ValueError("LDA needs a non-empty corpus")
    alpha = 50.0 / K if alpha is None else float(alpha)
    if alpha <= 0 or beta <= 0:
        raise ValueError("alpha and beta must be positive")

    docs = [lda_tokens(t) for t in corpus_texts]
    vocab_list = sorted({t for doc in docs for t in doc})
    if not vocab_list:
        raise ValueError("empty vocabulary after stop-word filtering")
    vocabulary = {w: i for i, w in enumerate(vocab_list)}
    V = len(vocab_list)

    word_ids = np.fromiter((vocabulary[t] for doc in docs for t in doc), dtype=np.int64)
    doc_ids = np.fromiter((d for d, doc in enumerate(docs) for _ in doc), dtype=np.int64)
    n_tokens = word_ids.shape[0]

    rng = np.random.default_rng(seed)
    z = rng.integers(K, size=n_tokens)
    ndk = np.zeros((len(docs), K), dtype=np.float64)
    nkw = np.zeros((K, V), dtype=np.float64)
    np.add.at(ndk, (doc_ids, z), 1.0)
    np.add.at(nkw, (z, word_ids), 1.0)
    nk = np.bincount(z, minlength=K).astype(np.float64)
    v_beta = V * beta

    logger.debug("lda: %d docs, %d tokens, V=%d, K=%d, %d sweeps", len(docs), n_tokens, V, K, iters)
    for _ in range(iters):
        uniforms = rng.random(n_tokens)
        for i in range(n_tokens):
            d = doc_ids[i]
            w = word_ids[i]
            k = z[i]
            ndk[d, k] -= 1.0
            nkw[k, w] -= 1.0
            nk[k] -= 1.0
            weights = (ndk[d] + alpha) * (nkw[:, w] + beta) / (nk + v_beta)
            k = _draw(weights, uniforms[i])
            z[i] = k
            ndk[d, k] += 1.0
            nkw[k, w] += 1.0
            nk[k] += 1.0

    topic_word = (nkw + beta) / (nk[:, None] + v_beta)
    topic_word /= topic_word.sum(axis=1, keepdims=True)
    return TopicModel(K=K, vocabulary=vocabulary, topic_word=topic_word, alpha=alpha, beta=beta)


def lda_infer(
    model: TopicModel,
    text: str,
    iters: int = LDA_INFER_SWEEPS,
    seed: int = LDA_SEED,
) -> np.ndarray:
    """Topic proportions of one document with the topic-word matrix held fixed."""
    ids = [model.vocabulary[t] for t in lda_tokens(text) if t in model.vocabulary]
    if not ids:
        return np.full(model.K, 1.0 / model.K)

    rng = np.random.default_rng(seed)
    n = len(ids)
    phi = model.topic_word[:, ids]
    z = rng.integers(model.K, size=n)
    ndk = np.bincount(z, minlength=model.K).astype(np.float64)
    for _ in range(iters):
        uniforms = rng.random(n)
        for i in range(n):
            ndk[z[i]] -= 1.0
            k = _draw((ndk + model.alpha) * phi[:, i], uniforms[i])
            z[i] = k
            ndk[k] += 1.0
    theta = (ndk + model.alpha) / (n + model.K * model.alpha)
    return theta / theta.sum()
