from __future__ import annotations

import sys
from pathlib import Path

import pytest


ROOT = Path(__file__).resolve().parents[1]
if str(ROOT) not in sys.path:
    sys.path.insert(0, str(ROOT))

from core.corpus import Corpus  # noqa: E402
from core.model import PostType, RawPost, UserRecord  # noqa: E402

T0 = 1_700_000_000


def _post(post_id: str, author: str, t: int, text: str = "", tags: tuple[str, ...] = (), **kwargs) -> RawPost:
    return RawPost(post_id=post_id, author_id=author, created_at=t, text=text, hashtags=frozenset(tags), **kwargs)


def build_tiny_corpus() -> Corpus:
    """Five users and four alpha/beta originals with a handful of reposts.

    Positives: (p1, u2), (p2, u5), (p4, u1), (p1, u3). r5 repeats (p1, u2),
    r6 is a self-repost and r7 falls outside the 24h window.
    """
    h1 = _post("h1", "u1", T0 - 5000, "good morning friends", ("alpha",), mentions=("u2",))
    h2 = _post(
        "h2", "u2", T0 - 4000, "good morning friends", ("alpha",), post_type=PostType.REPOST, parent_id="h1"
    )
    h3 = _post("h3", "u4", T0 - 3000, "terrible weather today", ("beta",))
    users = [
        UserRecord("u1", T0 - 400 * 86400, follower_count=3, followee_count=1, total_post_count=40,
                   following=frozenset({"u2"}), history=(h1,)),
        UserRecord("u2", T0 - 300 * 86400, follower_count=2, followee_count=2, total_post_count=25,
                   following=frozenset({"u1", "u3"}), history=(h2,)),
        UserRecord("u3", T0 - 200 * 86400, follower_count=1, followee_count=1, total_post_count=10,
                   following=frozenset({"u1"})),
        UserRecord("u4", T0 - 100 * 86400, followee_count=2, total_post_count=5,
                   following=frozenset({"u1", "u2"}), history=(h3,)),
        UserRecord("u5", T0 - 50 * 86400),
    ]
    originals = [
        _post("p1", "u1", T0, "great news about the launch", ("alpha",)),
        _post("p2", "u2", T0 + 600, "the launch was very good", ("alpha",)),
        _post("p3", "u3", T0 + 1200, "launch delayed again, bad luck", ("alpha",)),
        _post("p4", "u4", T0 + 1800, "rain all day in the city", ("beta",)),
    ]
    reposts = [
        _post("r1", "u2", T0 + 3600, "great news about the launch", ("alpha",),
              post_type=PostType.REPOST, parent_id="p1"),
        _post("r2", "u3", T0 + 7200, "finally", ("alpha",), post_type=PostType.QUOTE, parent_id="p1"),
        _post("r3", "u5", T0 + 4000, "agreed", ("alpha",), post_type=PostType.REPLY, parent_id="p2",
              mentions=("u2",)),
        _post("r4", "u1", T0 + 5000, "rain all day in the city", ("beta",),
              post_type=PostType.REPOST, parent_id="p4"),
        _post("r5", "u2", T0 + 9000, "great news about the launch", ("alpha",),
              post_type=PostType.REPOST, parent_id="p1"),
        _post("r6", "u1", T0 + 100, "great news about the launch", ("alpha",),
              post_type=PostType.REPOST, parent_id="p1"),
        _post("r7", "u4", T0 + 200_000, "launch delayed again, bad luck", ("alpha",),
              post_type=PostType.REPOST, parent_id="p3"),
    ]
    return Corpus(originals + reposts, users)


@pytest.fixture
def tiny_corpus() -> Corpus:
    return build_tiny_corpus()


@pytest.fixture(scope="session")
def tiny_topic_model():
    from textfeat.lda import LDAParams
    from userfeat.extract import fit_topic_model

    return fit_topic_model(build_tiny_corpus(), LDAParams(iters=20))


@pytest.fixture
def tiny_featurizer(tiny_corpus: Corpus, tiny_topic_model):
    from userfeat.extract import InstanceFeaturizer

    return InstanceFeaturizer(tiny_corpus, tiny_topic_model)


@pytest.fixture(scope="session")
def small_world_config():
    from synthgen.config import WorldConfig

    return WorldConfig(n_users=60, n_hashtags=2, posts_per_hashtag=10, history_length=10, seed=3)
