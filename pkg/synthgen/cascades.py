"""One-hop repost cascades driven by a logistic exposure model."""

from __future__ import annotations

import logging
from dataclasses import asdict, dataclass, field
from typing import Any

import numpy as np

from core.config import REPOST_WINDOW_SECONDS
from core.maths import sigmoid
from core.model import PostType, RawPost
from synthgen.config import WorldConfig
from synthgen.world import World, random_streams

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class Exposure:
    """One (post, exposed user) pair with every term of its repost logit."""

    post_id: str
    user_id: str
    follows: int
    interacted: int
    activity: float
    topic_match: float
    valence: int
    probability: float
    reposted: bool

    def to_dict(self) -> dict[str, Any]:
        return asdict(self)


@dataclass
class CascadeResult:
    reposts: list[RawPost] = field(default_factory=list)
    exposures: list[Exposure] = field(default_factory=list)

    @property
    def repost_rate(self) -> float:
        if not self.exposures:
            return 0.0
        return sum(e.reposted for e in self.exposures) / len(self.exposures)


def repost_logit(
    config: WorldConfig,
    follows: np.ndarray,
    interacted: np.ndarray,
    activity: np.ndarray,
    topic_match: np.ndarray,
    valence: float,
) -> np.ndarray:
    return (
        config.base_rate
        + config.alpha_follow * follows
        + config.alpha_interact * interacted
        + config.alpha_activity * activity
        + config.beta_topic * topic_match
        + config.beta_sentiment * valence
    )


def generate_cascades(world: World, config: WorldConfig | None = None) -> CascadeResult:
    """Expose each original to the author's followers plus a sampled share of
    non-followers and draw reposts from the logistic model.

    Every post consumes the same number of draws whatever the weights, so
    raising base_rate with a fixed seed only ever adds reposts.
    """
    config = config or world.config
    rng = random_streams(config.seed)["cascades"]
    n = len(world.ids)
    index = world.index
    result = CascadeResult()
    counter = 0
    for post in world.originals:
        sender = index[post.author_id]
        info = world.meta[post.post_id]
        u_repost = rng.random(n)
        u_expose = rng.random(n)
        latency = rng.integers(1, REPOST_WINDOW_SECONDS + 1, size=n)
        kind = rng.random(n)

        follows = np.zeros(n)
        for follower in world.graph.predecessors(post.author_id):
            follows[index[follower]] = 1.0
        exposed = (follows > 0) | (u_expose < config.nonfollower_exposure)
        exposed[sender] = False
        targets = np.flatnonzero(exposed)
        if targets.size == 0:
            continue
        interacted = np.array(
            [1.0 if (world.ids[j], post.author_id) in world.interacted else 0.0 for j in targets]
        )
        match = world.interest[targets, info.hashtag_index]
        logits = repost_logit(
            config, follows[targets], interacted, world.activity[targets], match, float(info.valence)
        )
        probs = sigmoid(logits)
        for j, p, inter in zip(targets, probs, interacted):
            reposted = bool(u_repost[j] < p)
            result.exposures.append(
                Exposure(
                    post_id=post.post_id,
                    user_id=world.ids[j],
                    follows=int(follows[j]),
                    interacted=int(inter),
                    activity=float(world.activity[j]),
                    topic_match=float(world.interest[j, info.hashtag_index]),
                    valence=info.valence,
                    probability=float(p),
                    reposted=reposted,
                )
            )
            if not reposted:
                continue
            post_type = PostType.REPOST if kind[j] < 0.7 else PostType.QUOTE if kind[j] < 0.85 else PostType.REPLY
            result.reposts.append(
                RawPost(
                    post_id=f"r{counter:06d}",
                    author_id=world.ids[j],
                    created_at=post.created_at + int(latency[j]),
                    text=post.text,
                    hashtags=post.hashtags,
                    post_type=post_type,
                    parent_id=post.post_id,
                    mentions=(post.author_id,) if post_type == PostType.REPLY else (),
                )
            )
            counter += 1
    logger.info(
        "cascades: %d exposures, %d reposts (rate %.4f)",
        len(result.exposures),
        len(result.reposts),
        result.repost_rate,
    )
    return result
