"""On-disk cache for the topic model and per-post M vectors.

Entries live under $REPOSTLAB_CACHE and are keyed by the corpus content hash
plus the LDA settings, so a changed corpus never reads stale features.
"""

from __future__ import annotations

import hashlib
import json
import logging
import os
from pathlib import Path

import numpy as np

from core.config import CACHE_ENV_VAR, TOOL_VERSION
from textfeat.lda import LDAParams, TopicModel

logger = logging.getLogger(__name__)


def cache_key(corpus_hash: str, lda: LDAParams) -> str:
    payload = json.dumps({"corpus": corpus_hash, "lda": lda.to_dict(), "version": TOOL_VERSION}, sort_keys=True)
    return hashlib.sha256(payload.encode("utf-8")).hexdigest()[:24]


class FeatureCache:
    def __init__(self, directory: str | Path | None) -> None:
        self.directory = None if directory is None else Path(directory)

    @classmethod
    def from_env(cls) -> "FeatureCache":
        value = os.environ.get(CACHE_ENV_VAR, "").strip()
        return cls(value or None)

    @property
    def enabled(self) -> bool:
        return self.directory is not None

    def _path(self, key: str, suffix: str) -> Path:
        assert self.directory is not None
        return self.directory / f"{key}.{suffix}"

    def load_topic_model(self, key: str) -> TopicModel | None:
        if not self.enabled:
            return None
        path = self._path(key, "lda.json")
        if not path.is_file():
            return None
        logger.debug("topic model cache hit: %s", path)
        return TopicModel.from_dict(json.loads(path.read_text(encoding="utf-8")))

    def save_topic_model(self, key: str, model: TopicModel) -> None:
        if not self.enabled:
            return
        path = self._path(key, "lda.json")
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_text(json.dumps(model.to_dict(), sort_keys=True), encoding="utf-8")

    def load_post_features(self, key: str) -> dict[str, np.ndarray]:
        if not self.enabled:
            return {}
        path = self._path(key, "post_m.npz")
        if not path.is_file():
            return {}
        with np.load(path, allow_pickle=False) as data:
            keys = [str(k) for k in data["keys"]]
            matrix = data["values"]
        logger.debug("post feature cache hit: %d vectors from %s", len(keys), path)
        return {k: matrix[i] for i, k in enumerate(keys)}

    def save_post_features(self, key: str, vectors: dict[str, np.ndarray]) -> None:
        if not self.enabled or not vectors:
            return
        path = self._path(key, "post_m.npz")
        path.parent.mkdir(parents=True, exist_ok=True)
        keys = sorted(vectors)
        np.savez_compressed(path, keys=np.asarray(keys), values=np.stack([vectors[k] for k in keys]))
