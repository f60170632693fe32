"""Instance featurization: the full 303-value ALL vector and its schema slices.

InstanceFeaturizer owns every cache the extraction needs (post M vectors,
per-user history summaries, the follow graph and its LeaderRank scores), so
one instance is featurized by looking things up, never by re-scoring text.
"""

from __future__ import annotations

import logging
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

from core.corpus import Corpus
from core.features import schema_size, schema_slice
from core.model import FeatureVector, Instance, PostType, RawPost
from scorers import ScorerRegistry
from textfeat.lda import LDAParams, TopicModel, lda_train
from textfeat.post import HashtagVocab, lda_part, post_feature_array
from userfeat.graph import FollowGraph
from userfeat.historical import historical_post_features
from userfeat.history import HistorySummary
from userfeat.interaction import interaction_features
from userfeat.profile import NetworkContext, profile_features

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class FeaturizerConfig:
    """strict_causality truncates histories at each instance's event time."""

    strict_causality: bool = False
    reference_date: int | None = None
    lda: LDAParams = field(default_factory=LDAParams)


@dataclass
class FeatureStats:
    instances: int = 0
    zero_tors: int = 0

    def to_dict(self) -> dict[str, int]:
        return {"instances": self.instances, "zero_tors": self.zero_tors}


def fit_topic_model(corpus: Corpus, params: LDAParams | None = None) -> TopicModel:
    """Train LDA on the original posts of posts.jsonl (all posts if there are none)."""
    params = params or LDAParams()
    texts = [p.text for p in corpus.posts.values() if p.post_type == PostType.ORIGINAL]
    if not texts:
        texts = [p.text for p in corpus.known_posts.values()]
    logger.info("training topic model on %d posts", len(texts))
    return lda_train(
        texts,
        K=params.K,
        alpha=params.alpha,
        beta=params.beta,
        iters=params.iters,
        seed=params.seed,
    )


def _post_key(post_id: str, hashtag: str | None) -> str:
    return f"{post_id}|{hashtag or ''}"


_WORKER_STATE: dict[str, object] = {}


def _init_worker(topic_model: TopicModel, hashtag_vocab: HashtagVocab) -> None:
    _WORKER_STATE["topic_model"] = topic_model
    _WORKER_STATE["hashtag_vocab"] = hashtag_vocab
    _WORKER_STATE["registry"] = ScorerRegistry.default()


def _score_chunk(chunk: list[tuple[RawPost, str | None]]) -> list[np.ndarray]:
    return [
        post_feature_array(
            post,
            _WORKER_STATE["topic_model"],
            _WORKER_STATE["registry"],
            _WORKER_STATE["hashtag_vocab"],
            hashtag,
        )
        for post, hashtag in chunk
    ]


class InstanceFeaturizer:
    def __init__(
        self,
        corpus: Corpus,
        topic_model: TopicModel,
        *,
        registry: ScorerRegistry | None = None,
        hashtag_vocab: HashtagVocab | None = None,
        config: FeaturizerConfig | None = None,
    ) -> None:
        self.corpus = corpus
        self.topic_model = topic_model
        self.registry = registry or ScorerRegistry.default()
        missing = self.registry.missing()
        if missing:
            raise ValueError(f"scorer registry is missing: {', '.join(missing)}")
        self.hashtag_vocab = hashtag_vocab or HashtagVocab.build(corpus.hashtags())
        self.config = config or FeaturizerConfig()
        self.reference_date = (
            self.config.reference_date
            if self.config.reference_date is not None
            else corpus.max_timestamp()
        )
        self.graph = FollowGraph.from_users(corpus.users.values())
        self.context = NetworkContext(corpus, self.graph)
        self.stats = FeatureStats()
        self._post_m: dict[str, np.ndarray] = {}
        self._summaries: dict[tuple[str, int | None], HistorySummary] = {}

    # -- post features -----------------------------------------------------

    def preload(self, vectors: dict[str, np.ndarray]) -> None:
        self._post_m.update(vectors)

    def cached_post_features(self) -> dict[str, np.ndarray]:
        return dict(self._post_m)

    def post_m(self, post: RawPost, hashtag: str | None = None) -> np.ndarray:
        tag = hashtag if hashtag is not None else post.primary_hashtag
        key = _post_key(post.post_id, tag)
        vector = self._post_m.get(key)
        if vector is None:
            vector = post_feature_array(post, self.topic_model, self.registry, self.hashtag_vocab, tag)
            self._post_m[key] = vector
        return vector

    def precompute(self, requests: Iterable[tuple[RawPost, str | None]], jobs: int = 1) -> int:
        """Score every (post, hashtag) not cached yet, in worker processes when jobs > 1."""
        todo: list[tuple[RawPost, str | None]] = []
        seen: set[str] = set()
        for post, hashtag in requests:
            tag = hashtag if hashtag is not None else post.primary_hashtag
            key = _post_key(post.post_id, tag)
            if key in self._post_m or key in seen:
                continue
            seen.add(key)
            todo.append((post, tag))
        if not todo:
            return 0

        workers = max(1, min(jobs, os.cpu_count() or 1))
        if workers > 1 and len(todo) > workers:
            size = -(-len(todo) // (workers * 4))
            chunks = [todo[i : i + size] for i in range(0, len(todo), size)]
            try:
                with ProcessPoolExecutor(
                    max_workers=workers,
                    initializer=_init_worker,
                    initargs=(self.topic_model, self.hashtag_vocab),
                ) as pool:
                    for chunk, vectors in zip(chunks, pool.map(_score_chunk, chunks)):
                        for (post, tag), vector in zip(chunk, vectors):
                            self._post_m[_post_key(post.post_id, tag)] = vector
                return len(todo)
            except Exception as exc:
                logger.warning(
                    "post scoring workers unavailable (%s: %s); falling back to sequential execution",
                    type(exc).__name__,
                    exc,
                )
        for post, tag in todo:
            self.post_m(post, tag)
        return len(todo)

    def history_requests(self, instances: Iterable[Instance]) -> list[tuple[RawPost, str | None]]:
        requests: list[tuple[RawPost, str | None]] = []
        for inst in instances:
            requests.append((inst.post, inst.hashtag))
            for user in (inst.sender, inst.recipient):
                requests.extend((p, None) for p in user.history)
        return requests

    # -- user features -----------------------------------------------------

    def _cutoff(self, event_time: int) -> int | None:
        return event_time if self.config.strict_causality else None

    def summary(self, user_id: str, cutoff: int | None = None) -> HistorySummary:
        key = (user_id, cutoff)
        cached = self._summaries.get(key)
        if cached is None:
            user = self.corpus.users[user_id]
            posts = user.history_until(cutoff)
            if posts:
                post_m = np.stack([self.post_m(p) for p in posts])
            else:
                post_m = np.empty((0, schema_size("M")))
            cached = HistorySummary.build(user_id, posts, post_m)
            self._summaries[key] = cached
        return cached

    def instance_array(self, instance: Instance) -> np.ndarray:
        """The ALL vector (M ∥ U-P ∥ U-HA ∥ U-HM) of one instance."""
        sender, recipient = instance.sender, instance.recipient
        cutoff = self._cutoff(instance.event_time)
        s_summary = self.summary(sender.user_id, cutoff)
        r_summary = self.summary(recipient.user_id, cutoff)
        m = self.post_m(instance.post, instance.hashtag)

        u_p = (
            profile_features(sender, recipient, self.graph, self.reference_date, self.context)
            + profile_features(recipient, sender, self.graph, self.reference_date, self.context)
        )
        interaction = interaction_features(
            s_summary,
            r_summary,
            instance,
            lda_part(m),
            self.corpus.parent_author,
        )
        if interaction.zero_tors:
            self.stats.zero_tors += 1
        u_ha = (
            s_summary.activity
            + s_summary.popularity
            + r_summary.activity
            + r_summary.popularity
            + interaction.values
        )
        u_hm = historical_post_features(s_summary, r_summary)
        self.stats.instances += 1
        return np.concatenate([m, np.asarray(u_p), np.asarray(u_ha), u_hm])

    def vector(self, instance: Instance, schema_id: str = "ALL") -> FeatureVector:
        return FeatureVector.from_array(schema_id, self.instance_array(instance)[schema_slice(schema_id)])

    def transform(self, instances: Sequence[Instance], schema_id: str = "ALL") -> np.ndarray:
        """Feature matrix with one row per instance, columns per feature_dictionary(schema_id)."""
        columns = schema_slice(schema_id)
        width = columns.stop - columns.start
        if not instances:
            return np.empty((0, width))
        return np.stack([self.instance_array(inst)[columns] for inst in instances])

    # -- negative selection ------------------------------------------------

    def similarity_vector(self, post: RawPost, recipient_id: str, event_time: int, hashtag: str | None) -> np.ndarray:
        """Post M ∥ sender U-P ∥ sender activity+popularity ∥ sender mean M."""
        sender = self.corpus.users[post.author_id]
        recipient = self.corpus.users[recipient_id]
        summary = self.summary(sender.user_id, self._cutoff(event_time))
        return np.concatenate(
            [
                self.post_m(post, hashtag),
                np.asarray(profile_features(sender, recipient, self.graph, self.reference_date, self.context)),
                np.asarray(summary.activity + summary.popularity),
                summary.mean_m,
            ]
        )
