"""TF-IDF bag-of-words input for the content-only neural models."""

from __future__ import annotations

from typing import Sequence

import numpy as np
from sklearn.feature_extraction.text import TfidfVectorizer

from core.config import BOW_VOCAB_SIZE
from textfeat.lda import lda_tokens


class BowEncoder:
    """Vocabulary of the `vocab_size` most frequent tokens of the fitting texts."""

    def __init__(self, vocab_size: int = BOW_VOCAB_SIZE) -> None:
        if vocab_size < 1:
            raise ValueError(f"vocab_size must be >= 1, got {vocab_size}")
        self.vocab_size = vocab_size
        self._vectorizer = TfidfVectorizer(
            tokenizer=lda_tokens,
            lowercase=False,
            token_pattern=None,
            max_features=vocab_size,
        )
        self.fitted = False

    def fit(self, texts: Sequence[str]) -> "BowEncoder":
        try:
            self._vectorizer.fit(list(texts))
        except ValueError as exc:
            raise ValueError(f"bag-of-words vocabulary is empty ({exc})") from exc
        self.fitted = True
        return self

    def transform(self, texts: Sequence[str]) -> np.ndarray:
        if not self.fitted:
            raise RuntimeError("bag-of-words encoder is not fitted")
        return self._vectorizer.transform(list(texts)).toarray()

    @property
    def vocabulary(self) -> list[str]:
        return list(self._vectorizer.get_feature_names_out())

    def column_names(self) -> list[str]:
        return [f"BOW_{w}" for w in self.vocabulary]


def bow_encode(texts: Sequence[str], vocab_size: int = BOW_VOCAB_SIZE) -> np.ndarray:
    """Fit on `texts` and encode them; unknown tokens are dropped."""
    return BowEncoder(vocab_size).fit(texts).transform(texts)
