"""Positive repost events: reposts, quotes and replies within 24h of their original."""

from __future__ import annotations

import logging
from dataclasses import dataclass, field

from core.config import REPOST_WINDOW_SECONDS
from core.corpus import Corpus
from core.model import RepostEvent

logger = logging.getLogger(__name__)


@dataclass
class PositiveScan:
    events: list[RepostEvent] = field(default_factory=list)
    missing_parent: int = 0
    out_of_window: int = 0
    duplicates: int = 0
    self_reposts: int = 0
    unknown_users: int = 0

    def to_dict(self) -> dict[str, int]:
        return {
            "positives": len(self.events),
            "missing_parent": self.missing_parent,
            "out_of_window": self.out_of_window,
            "duplicates": self.duplicates,
            "self_reposts": self.self_reposts,
            "unknown_users": self.unknown_users,
        }


def scan_positives(corpus: Corpus) -> PositiveScan:
    """Enumerate positives and count every reason a repost was skipped.

    Only the earliest repost of an original by a given recipient counts;
    reposts of one's own posts are skipped.
    """
    scan = PositiveScan()
    earliest: dict[tuple[str, str], RepostEvent] = {}
    for post in sorted(corpus.posts.values(), key=lambda p: (p.created_at, p.post_id)):
        if post.parent_id is None:
            continue
        original = corpus.posts.get(post.parent_id)
        if original is None:
            scan.missing_parent += 1
            continue
        latency = post.created_at - original.created_at
        if not 0 < latency <= REPOST_WINDOW_SECONDS:
            scan.out_of_window += 1
            continue
        if post.author_id == original.author_id:
            scan.self_reposts += 1
            continue
        if post.author_id not in corpus.users or original.author_id not in corpus.users:
            scan.unknown_users += 1
            continue
        key = (original.post_id, post.author_id)
        if key in earliest:
            scan.duplicates += 1
            continue
        earliest[key] = RepostEvent(
            original=original,
            recipient_id=post.author_id,
            repost_time=post.created_at,
            repost_id=post.post_id,
        )
    scan.events = sorted(
        earliest.values(), key=lambda e: (e.repost_time, e.original.post_id, e.recipient_id)
    )
    if scan.missing_parent:
        logger.warning("%d reposts skipped: original post not in the corpus", scan.missing_parent)
    if scan.out_of_window:
        logger.info("%d reposts skipped: outside the 24h window", scan.out_of_window)
    logger.info("enumerated %d positive repost events", len(scan.events))
    return scan


def enumerate_positives(corpus: Corpus) -> list[RepostEvent]:
    return scan_positives(corpus).events
