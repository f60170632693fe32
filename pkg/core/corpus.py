"""JSONL corpus loading, cross-linking and canonical serialization."""

from __future__ import annotations

import json
import logging
from collections import defaultdict
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Iterable

from core.errors import CorpusError
from core.model import RawPost, UserRecord

logger = logging.getLogger(__name__)


@dataclass
class LoadReport:
    posts: int = 0
    users: int = 0
    warnings: list[str] = field(default_factory=list)

    def warn(self, message: str) -> None:
        self.warnings.append(message)
        logger.warning(message)


class Corpus:
    """Posts and users indexed by id, plus derived lookups.

    `posts` holds the studied posts (posts.jsonl); `known_posts` additionally
    indexes every post embedded in user histories so parent references from
    histories can be resolved to their authors.
    """

    def __init__(
        self,
        posts: Iterable[RawPost],
        users: Iterable[UserRecord],
        *,
        report: LoadReport | None = None,
    ) -> None:
        self.posts: dict[str, RawPost] = {}
        for post in posts:
            if post.post_id in self.posts:
                raise CorpusError(f"duplicate post id {post.post_id!r}")
            self.posts[post.post_id] = post
        self.users: dict[str, UserRecord] = {}
        for user in users:
            if user.user_id in self.users:
                raise CorpusError(f"duplicate user id {user.user_id!r}")
            self.users[user.user_id] = user
        self.report = report or LoadReport(posts=len(self.posts), users=len(self.users))

        self.known_posts: dict[str, RawPost] = {}
        for user in self.users.values():
            for post in user.history:
                self.known_posts.setdefault(post.post_id, post)
        self.known_posts.update(self.posts)

        self.posts_by_author: dict[str, list[RawPost]] = defaultdict(list)
        self.reposts_by_parent: dict[str, list[RawPost]] = defaultdict(list)
        for post in self.posts.values():
            self.posts_by_author[post.author_id].append(post)
            if post.parent_id is not None:
                self.reposts_by_parent[post.parent_id].append(post)

    def check_references(self) -> None:
        for post in self.posts.values():
            if post.parent_id is not None and post.parent_id not in self.posts:
                self.report.warn(f"post {post.post_id}: dangling parent_id {post.parent_id!r}")
            if post.author_id not in self.users:
                self.report.warn(f"post {post.post_id}: dangling author_id {post.author_id!r}")

    def parent_author(self, post: RawPost) -> str | None:
        if post.parent_id is None:
            return None
        parent = self.known_posts.get(post.parent_id)
        return None if parent is None else parent.author_id

    def reposted_by(self, user_id: str) -> set[str]:
        """Ids of posts that `user_id` reposted, quoted or replied to."""
        return {
            p.parent_id
            for p in self.posts_by_author.get(user_id, ())
            if p.parent_id is not None
        }

    def max_timestamp(self) -> int:
        stamps = [p.created_at for p in self.known_posts.values()]
        stamps += [u.registered_at for u in self.users.values()]
        return max(stamps) if stamps else 0

    def max_post_count(self) -> int:
        return max((u.total_post_count for u in self.users.values()), default=0)

    def hashtags(self) -> list[str]:
        tags: set[str] = set()
        for post in self.posts.values():
            tags.update(post.hashtags)
        return sorted(tags)


def _canonical(obj: dict[str, Any]) -> str:
    return json.dumps(obj, sort_keys=True, separators=(",", ":"), ensure_ascii=False)


def _read_jsonl(path: Path, parse) -> list:
    items = []
    with path.open("r", encoding="utf-8") as fh:
        for line_no, line in enumerate(fh, start=1):
            if not line.strip():
                continue
            try:
                data = json.loads(line)
            except json.JSONDecodeError as exc:
                raise CorpusError(f"malformed JSON ({exc.msg})", path=path, line_no=line_no) from exc
            if not isinstance(data, dict):
                raise CorpusError("expected a JSON object", path=path, line_no=line_no)
            try:
                items.append(parse(data))
            except KeyError as exc:
                raise CorpusError(f"missing field {exc.args[0]!r}", path=path, line_no=line_no) from exc
            except (TypeError, ValueError) as exc:
                raise CorpusError(f"invariant violation: {exc}", path=path, line_no=line_no) from exc
    return items


def load_corpus(posts_path: str | Path, users_path: str | Path) -> Corpus:
    posts_path = Path(posts_path)
    users_path = Path(users_path)
    for path in (posts_path, users_path):
        if not path.is_file():
            raise FileNotFoundError(f"corpus file not found: {path}")

    posts = _read_jsonl(posts_path, RawPost.from_dict)
    users = _read_jsonl(users_path, UserRecord.from_dict)
    report = LoadReport(posts=len(posts), users=len(users))
    try:
        corpus = Corpus(posts, users, report=report)
    except CorpusError as exc:
        source = posts_path if "post id" in str(exc) else users_path
        raise CorpusError(str(exc), path=source) from exc
    corpus.check_references()
    logger.info(
        "loaded %d posts and %d users (%d warnings)",
        len(corpus.posts),
        len(corpus.users),
        len(report.warnings),
    )
    return corpus


def load_corpus_dir(directory: str | Path) -> Corpus:
    directory = Path(directory)
    return load_corpus(directory / "posts.jsonl", directory / "users.jsonl")


def serialize_corpus(corpus: Corpus, posts_path: str | Path, users_path: str | Path) -> None:
    """Write canonical JSONL; ids keep their insertion order."""
    for path, records in (
        (Path(posts_path), [p.to_dict() for p in corpus.posts.values()]),
        (Path(users_path), [u.to_dict() for u in corpus.users.values()]),
    ):
        path.parent.mkdir(parents=True, exist_ok=True)
        with path.open("w", encoding="utf-8", newline="\n") as fh:
            for record in records:
                fh.write(_canonical(record))
                fh.write("\n")


__all__ = [
    "Corpus",
    "LoadReport",
    "load_corpus",
    "load_corpus_dir",
    "serialize_corpus",
]
