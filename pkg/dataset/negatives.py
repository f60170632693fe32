"""Negative instance selection.

Two schemes: similarity negatives (same hashtag, same 24h window, nearest to
the positive by cosine distance) and general negatives (random causal
post/user pairings with no similarity constraint).
"""

from __future__ import annotations

import bisect
import logging
from collections import defaultdict
from dataclasses import dataclass
from typing import Callable, Collection, Sequence

import numpy as np

from core.config import GENERAL_DRAW_BUDGET, REPOST_WINDOW_SECONDS
from core.corpus import Corpus
from core.errors import SamplingError
from core.maths import TimeSpan, cosine_distances_to
from core.model import Instance, PostType, RawPost, RepostEvent

logger = logging.getLogger(__name__)

GENERAL_ANCHOR = "general"

# (post, recipient_id, event_time, hashtag) -> similarity vector
SimilarityFn = Callable[[RawPost, str, int, str | None], np.ndarray]


class CandidateIndex:
    """Original posts with a known author, grouped by hashtag and sorted by time."""

    def __init__(self, corpus: Corpus) -> None:
        self.corpus = corpus
        by_tag: dict[str, list[RawPost]] = defaultdict(list)
        for post in corpus.posts.values():
            if post.post_type != PostType.ORIGINAL or post.author_id not in corpus.users:
                continue
            for tag in post.hashtags:
                by_tag[tag].append(post)
        self._posts: dict[str, list[RawPost]] = {}
        self._times: dict[str, list[int]] = {}
        for tag, posts in by_tag.items():
            posts.sort(key=lambda p: (p.created_at, p.post_id))
            self._posts[tag] = posts
            self._times[tag] = [p.created_at for p in posts]
        unique = {p.post_id: p for posts in by_tag.values() for p in posts}
        self._all = sorted(unique.values(), key=lambda p: (p.created_at, p.post_id))
        self._all_times = [p.created_at for p in self._all]
        self._reposted: dict[str, set[str]] = {}

    def reposted_by(self, user_id: str) -> set[str]:
        if user_id not in self._reposted:
            self._reposted[user_id] = self.corpus.reposted_by(user_id)
        return self._reposted[user_id]

    def between(self, hashtag: str, span: TimeSpan) -> list[RawPost]:
        times = self._times.get(hashtag, [])
        lo = bisect.bisect_left(times, span.start)
        hi = bisect.bisect_left(times, span.end)
        return self._posts.get(hashtag, [])[lo:hi]

    def before(self, t: int) -> list[RawPost]:
        """Tagged originals of every hashtag created strictly before t."""
        return self._all[: bisect.bisect_left(self._all_times, t)]

    def eligible(
        self,
        posts: Sequence[RawPost],
        event: RepostEvent,
        exclude: Collection[str] = frozenset(),
    ) -> list[RawPost]:
        reposted = self.reposted_by(event.recipient_id)
        out = [
            p
            for p in posts
            if p.post_id != event.original.post_id
            and p.post_id not in reposted
            and p.post_id not in exclude
            and p.author_id != event.recipient_id
        ]
        out.sort(key=lambda p: p.post_id)
        return out


def negative_pool(event: RepostEvent, corpus: Corpus, index: CandidateIndex | None = None) -> list[RawPost]:
    """Same-hashtag originals created in [repost_time - 24h, repost_time), sorted by post_id.

    The window is the set of creation times a positive may have (latency in
    (0, 24h]), so a post created at repost_time itself is not a candidate.
    """
    hashtag = event.original.primary_hashtag
    if hashtag is None:
        return []
    index = index or CandidateIndex(corpus)
    span = TimeSpan.before(event.repost_time, REPOST_WINDOW_SECONDS)
    return index.eligible(index.between(hashtag, span), event)


def _negative_instance(corpus: Corpus, event: RepostEvent, post: RawPost, hashtag: str) -> Instance:
    return Instance(
        instance_id=Instance.negative_id(post.post_id, event.recipient_id, event.original.post_id),
        post=post,
        sender=corpus.users[post.author_id],
        recipient=corpus.users[event.recipient_id],
        event_time=event.repost_time,
        hashtag=hashtag,
        label=0,
    )


@dataclass(frozen=True)
class Selection:
    instances: list[Instance]
    deficit: int


def rank_candidates(
    event: RepostEvent,
    pool: Sequence[RawPost],
    feature_fn: SimilarityFn,
) -> list[tuple[float, RawPost]]:
    """Pool ordered by ascending cosine distance to the positive; ties by post_id."""
    if not pool:
        return []
    hashtag = event.original.primary_hashtag
    anchor = feature_fn(event.original, event.recipient_id, event.repost_time, hashtag)
    rows = np.stack([feature_fn(p, event.recipient_id, event.repost_time, hashtag) for p in pool])
    distances = cosine_distances_to(anchor, rows)
    ranked = sorted(zip(distances.tolist(), pool), key=lambda item: (item[0], item[1].post_id))
    return ranked


def select_negatives(
    event: RepostEvent,
    pool: Sequence[RawPost],
    n: int,
    feature_fn: SimilarityFn,
    corpus: Corpus,
) -> Selection:
    """The n candidates nearest to the positive's post and sender."""
    hashtag = event.original.primary_hashtag or ""
    ranked = rank_candidates(event, pool, feature_fn)[:n]
    instances = [_negative_instance(corpus, event, post, hashtag) for _, post in ranked]
    deficit = n - len(instances)
    if deficit:
        logger.debug(
            "positive %s: pool of %d cannot supply %d negatives",
            Instance.positive_id(event.original.post_id, event.recipient_id),
            len(pool),
            n,
        )
    return Selection(instances=instances, deficit=deficit)


def random_negatives(
    event: RepostEvent,
    n: int,
    chosen: set[str],
    index: CandidateIndex,
    rng: np.random.Generator,
) -> Selection:
    """n uniform draws from the corpus-wide negative space of the recipient.

    Candidates are tagged originals of any hashtag created before the repost,
    minus `chosen`, the recipient's own posts and everything they reposted.
    Each negative is filed under its own post's hashtag.
    """
    candidates = index.eligible(index.before(event.repost_time), event, exclude=chosen)
    take = min(n, len(candidates))
    picks = rng.choice(len(candidates), size=take, replace=False) if take else []
    posts = sorted((candidates[int(i)] for i in picks), key=lambda p: p.post_id)
    instances = [
        _negative_instance(index.corpus, event, post, post.primary_hashtag or "") for post in posts
    ]
    return Selection(instances=instances, deficit=n - take)


def _user_activities(
    corpus: Corpus,
    events: Sequence[RepostEvent],
    posts: Sequence[RawPost],
) -> list[tuple[str, int]]:
    activities = {(p.author_id, p.created_at) for p in posts}
    activities.update((e.recipient_id, e.repost_time) for e in events)
    return sorted(a for a in activities if a[0] in corpus.users)


def general_negatives(
    corpus: Corpus,
    events: Sequence[RepostEvent],
    k_per_positive: int,
    seed: int,
) -> list[Instance]:
    """Random (post, active user) pairings with t_user > t_post and no observed repost.

    Raises SamplingError when 10,000·k draws per positive do not yield enough pairs.
    """
    target = k_per_positive * len(events)
    if target == 0:
        return []
    posts = sorted(
        (
            p
            for p in corpus.posts.values()
            if p.post_type == PostType.ORIGINAL and p.hashtags and p.author_id in corpus.users
        ),
        key=lambda p: p.post_id,
    )
    activities = _user_activities(corpus, events, posts)
    if not posts or not activities:
        raise SamplingError("general negatives need at least one post and one user activity")

    reposted = {(e.original.post_id, e.recipient_id) for e in events}
    reposted.update(
        (p.parent_id, p.author_id) for p in corpus.posts.values() if p.parent_id is not None
    )
    rng = np.random.default_rng(seed)
    budget = GENERAL_DRAW_BUDGET * target
    seen: set[tuple[str, str]] = set()
    out: list[Instance] = []
    draws = 0
    while len(out) < target:
        if draws >= budget:
            raise SamplingError(
                f"general negative sampling produced {len(out)}/{target} pairs in {budget} draws"
            )
        draws += 1
        post = posts[int(rng.integers(len(posts)))]
        user_id, t_u = activities[int(rng.integers(len(activities)))]
        pair = (post.post_id, user_id)
        if t_u <= post.created_at or user_id == post.author_id or pair in reposted or pair in seen:
            continue
        seen.add(pair)
        out.append(
            Instance(
                instance_id=Instance.negative_id(post.post_id, user_id, GENERAL_ANCHOR),
                post=post,
                sender=corpus.users[post.author_id],
                recipient=corpus.users[user_id],
                event_time=t_u,
                hashtag=post.primary_hashtag or "",
                label=0,
            )
        )
    logger.info("general negatives: %d pairs in %d draws", len(out), draws)
    return out
