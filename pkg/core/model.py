"""Domain types shared by every stage of the pipeline.

All types are frozen dataclasses; once built they are never mutated, so they
can be shared freely between threads and worker processes.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import StrEnum
from typing import Any

import numpy as np

from core.config import HISTORY_LIMIT, REPOST_WINDOW_SECONDS


class PostType(StrEnum):
    ORIGINAL = "original"
    REPOST = "repost"
    QUOTE = "quote"
    REPLY = "reply"


POST_TYPE_ORDER: tuple[PostType, ...] = (
    PostType.ORIGINAL,
    PostType.REPOST,
    PostType.QUOTE,
    PostType.REPLY,
)


@dataclass(frozen=True)
class PostMetrics:
    reposts: int = 0
    quotes: int = 0
    replies: int = 0
    likes: int = 0

    def __post_init__(self) -> None:
        for name in ("reposts", "quotes", "replies", "likes"):
            value = getattr(self, name)
            if int(value) != value or value < 0:
                raise ValueError(f"metric {name} must be a non-negative integer, got {value!r}")

    @classmethod
    def from_dict(cls, data: dict[str, Any]) -> "PostMetrics":
        return cls(
            reposts=int(data.get("reposts", 0)),
            quotes=int(data.get("quotes", 0)),
            replies=int(data.get("replies", 0)),
            likes=int(data.get("likes", 0)),
        )

    def to_dict(self) -> dict[str, int]:
        return {
            "reposts": self.reposts,
            "quotes": self.quotes,
            "replies": self.replies,
            "likes": self.likes,
        }

    def as_tuple(self) -> tuple[int, int, int, int]:
        return (self.reposts, self.quotes, self.replies, self.likes)


@dataclass(frozen=True)
class RawPost:
    """One post as ingested.

    `post_type` keeps the four-valued provenance; `is_repost` is the merged
    label used for prediction (quotes and replies count as reposts).
    """

    post_id: str
    author_id: str
    created_at: int
    text: str = ""
    hashtags: frozenset[str] = frozenset()
    post_type: PostType = PostType.ORIGINAL
    parent_id: str | None = None
    metrics: PostMetrics = field(default_factory=PostMetrics)
    mentions: tuple[str, ...] = ()

    def __post_init__(self) -> None:
        if not self.post_id:
            raise ValueError("post_id must be non-empty")
        if int(self.created_at) <= 0:
            raise ValueError(f"post {self.post_id}: created_at must be > 0")
        if (self.post_type == PostType.ORIGINAL) != (self.parent_id is None):
            raise ValueError(
                f"post {self.post_id}: parent_id must be set exactly when post_type is not original"
            )

    @property
    def is_repost(self) -> bool:
        return self.post_type != PostType.ORIGINAL

    @property
    def primary_hashtag(self) -> str | None:
        return min(self.hashtags) if self.hashtags else None

    @classmethod
    def from_dict(cls, data: dict[str, Any]) -> "RawPost":
        parent = data.get("parent_id")
        return cls(
            post_id=str(data["post_id"]),
            author_id=str(data["author_id"]),
            created_at=int(data["created_at"]),
            text=str(data.get("text", "")),
            hashtags=frozenset(str(h).lower() for h in data.get("hashtags", [])),
            post_type=PostType(data.get("post_type", "original")),
            parent_id=None if parent is None else str(parent),
            metrics=PostMetrics.from_dict(data.get("metrics", {})),
            mentions=tuple(str(m) for m in data.get("mentions", [])),
        )

    def to_dict(self) -> dict[str, Any]:
        return {
            "post_id": self.post_id,
            "author_id": self.author_id,
            "created_at": self.created_at,
            "text": self.text,
            "hashtags": sorted(self.hashtags),
            "post_type": str(self.post_type),
            "parent_id": self.parent_id,
            "metrics": self.metrics.to_dict(),
            "mentions": list(self.mentions),
        }


@dataclass(frozen=True)
class UserRecord:
    user_id: str
    registered_at: int
    follower_count: int = 0
    followee_count: int = 0
    total_post_count: int = 0
    listed_count: int = 0
    verified: bool = False
    profile_url_present: bool = False
    following: frozenset[str] = frozenset()
    history: tuple[RawPost, ...] = ()

    def __post_init__(self) -> None:
        for name in ("follower_count", "followee_count", "total_post_count", "listed_count"):
            if getattr(self, name) < 0:
                raise ValueError(f"user {self.user_id}: {name} must be >= 0")
        if len(self.history) > HISTORY_LIMIT:
            raise ValueError(
                f"user {self.user_id}: history has {len(self.history)} posts, limit is {HISTORY_LIMIT}"
            )
        times = [p.created_at for p in self.history]
        if any(b < a for a, b in zip(times, times[1:])):
            raise ValueError(f"user {self.user_id}: history must be sorted by created_at")

    def history_until(self, cutoff: int | None) -> tuple[RawPost, ...]:
        """Posts created at or before `cutoff` (all posts when cutoff is None)."""
        if cutoff is None:
            return self.history
        return tuple(p for p in self.history if p.created_at <= cutoff)

    @classmethod
    def from_dict(cls, data: dict[str, Any]) -> "UserRecord":
        return cls(
            user_id=str(data["user_id"]),
            registered_at=int(data["registered_at"]),
            follower_count=int(data.get("follower_count", 0)),
            followee_count=int(data.get("followee_count", 0)),
            total_post_count=int(data.get("total_post_count", 0)),
            listed_count=int(data.get("listed_count", 0)),
            verified=bool(data.get("verified", False)),
            profile_url_present=bool(data.get("profile_url_present", False)),
            following=frozenset(str(u) for u in data.get("following", [])),
            history=tuple(RawPost.from_dict(p) for p in data.get("history", [])),
        )

    def to_dict(self) -> dict[str, Any]:
        return {
            "user_id": self.user_id,
            "registered_at": self.registered_at,
            "follower_count": self.follower_count,
            "followee_count": self.followee_count,
            "total_post_count": self.total_post_count,
            "listed_count": self.listed_count,
            "verified": self.verified,
            "profile_url_present": self.profile_url_present,
            "following": sorted(self.following),
            "history": [p.to_dict() for p in self.history],
        }


@dataclass(frozen=True)
class RepostEvent:
    original: RawPost
    recipient_id: str
    repost_time: int
    repost_id: str | None = None

    def __post_init__(self) -> None:
        latency = self.repost_time - self.original.created_at
        if not 0 < latency <= REPOST_WINDOW_SECONDS:
            raise ValueError(
                f"repost of {self.original.post_id} by {self.recipient_id}: "
                f"latency {latency}s outside (0, {REPOST_WINDOW_SECONDS}]"
            )

    @property
    def sender_id(self) -> str:
        return self.original.author_id

    @property
    def latency(self) -> int:
        return self.repost_time - self.original.created_at


@dataclass(frozen=True)
class Instance:
    """A (post, sender, recipient, time) tuple with its repost label."""

    instance_id: str
    post: RawPost
    sender: UserRecord
    recipient: UserRecord
    event_time: int
    hashtag: str
    label: int

    def __post_init__(self) -> None:
        if self.label not in (0, 1):
            raise ValueError(f"instance {self.instance_id}: label must be 0 or 1")
        if self.event_time <= self.post.created_at:
            raise ValueError(
                f"instance {self.instance_id}: event_time must be after the post was created"
            )
        if self.sender.user_id != self.post.author_id:
            raise ValueError(f"instance {self.instance_id}: sender must author the post")

    @property
    def pair(self) -> tuple[str, str]:
        return (self.sender.user_id, self.recipient.user_id)

    @staticmethod
    def positive_id(post_id: str, recipient_id: str) -> str:
        return f"p:{post_id}:{recipient_id}"

    @staticmethod
    def negative_id(post_id: str, recipient_id: str, anchor_id: str) -> str:
        return f"n:{post_id}:{recipient_id}:{anchor_id}"


@dataclass(frozen=True)
class FeatureVector:
    schema_id: str
    values: tuple[float, ...]

    def __post_init__(self) -> None:
        from core.features import schema_size

        expected = schema_size(self.schema_id)
        if len(self.values) != expected:
            raise ValueError(
                f"{self.schema_id} vector must have {expected} values, got {len(self.values)}"
            )

    @classmethod
    def from_array(cls, schema_id: str, values: np.ndarray) -> "FeatureVector":
        return cls(schema_id, tuple(float(v) for v in np.asarray(values, dtype=np.float64)))

    @property
    def names(self) -> list[str]:
        from core.features import feature_dictionary

        return feature_dictionary(self.schema_id)

    def as_array(self) -> np.ndarray:
        return np.asarray(self.values, dtype=np.float64)

    def as_dict(self) -> dict[str, float]:
        return dict(zip(self.names, self.values))

    def missing_count(self) -> int:
        return sum(1 for v in self.values if math.isnan(v))


__all__ = [
    "PostType",
    "POST_TYPE_ORDER",
    "PostMetrics",
    "RawPost",
    "UserRecord",
    "RepostEvent",
    "Instance",
    "FeatureVector",
]
