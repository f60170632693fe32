"""Profile and network (U-P) features for one side of an instance."""

from __future__ import annotations

import logging
from collections import defaultdict

from core.config import SECONDS_PER_DAY
from core.corpus import Corpus
from core.model import UserRecord
from userfeat.graph import FollowGraph

logger = logging.getLogger(__name__)


class NetworkContext:
    """Corpus-wide lookups shared by every profile feature computation."""

    def __init__(self, corpus: Corpus, graph: FollowGraph) -> None:
        self.graph = graph
        self.max_post_count = corpus.max_post_count()
        self.reposters: dict[str, set[str]] = defaultdict(set)
        seen: set[str] = set()
        posts = list(corpus.posts.values())
        for user in corpus.users.values():
            posts.extend(user.history)
        for post in posts:
            if post.post_id in seen or post.parent_id is None:
                continue
            seen.add(post.post_id)
            parent_author = corpus.parent_author(post)
            if parent_author is not None and parent_author != post.author_id:
                self.reposters[parent_author].add(post.author_id)
        self.mentioned: dict[str, set[str]] = {
            u.user_id: {m for p in u.history for m in p.mentions} for u in corpus.users.values()
        }
        self.clamped_ages: set[str] = set()
        self._indegree: dict[str, int] = {}

    def indegree(self, user_id: str) -> int:
        """Followers of the user who were mentioned by, or reposted, the user."""
        if user_id not in self._indegree:
            interacted = self.mentioned.get(user_id, set()) | self.reposters.get(user_id, set())
            self._indegree[user_id] = len(self.graph.followers(user_id) & interacted)
        return self._indegree[user_id]

    def leaderrank(self, user_id: str) -> float:
        return self.graph.leaderrank_scores[user_id]


def account_age_days(user: UserRecord, reference_date: int, context: NetworkContext | None = None) -> float:
    age = (reference_date - user.registered_at) / SECONDS_PER_DAY
    if age < 0:
        if context is None or user.user_id not in context.clamped_ages:
            logger.warning(
                "user %s registered after the reference date; account age clamped to 0",
                user.user_id,
            )
            if context is not None:
                context.clamped_ages.add(user.user_id)
        return 0.0
    return age


def profile_features(
    user: UserRecord,
    counterpart: UserRecord,
    graph: FollowGraph,
    reference_date: int,
    context: NetworkContext,
) -> tuple[float, ...]:
    """12 profile values, LeaderRank, indegree and the follows-counterpart flag."""
    if user.user_id not in graph:
        raise ValueError(f"user {user.user_id} is not in the follow graph")
    age = account_age_days(user, reference_date, context)
    per_day = max(age, 1.0)
    spread = user.total_post_count / context.max_post_count if context.max_post_count else 0.0
    return (
        age,
        float(user.follower_count),
        float(user.followee_count),
        float(user.total_post_count),
        float(user.listed_count),
        spread,
        user.follower_count / per_day,
        user.followee_count / per_day,
        user.total_post_count / per_day,
        user.listed_count / per_day,
        float(user.verified),
        float(user.profile_url_present),
        context.leaderrank(user.user_id),
        float(context.indegree(user.user_id)),
        float(graph.follows(user.user_id, counterpart.user_id)),
    )
