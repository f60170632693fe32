"""Users, follow graph, histories and the studied original posts of a world."""

from __future__ import annotations

import logging
from dataclasses import dataclass, field, replace

import networkx as nx
import numpy as np
from scipy.stats import rankdata

from core.config import SECONDS_PER_DAY
from core.corpus import Corpus
from core.model import PostMetrics, PostType, RawPost, UserRecord
from synthgen.config import WorldConfig
from synthgen.vocab import Vocabularies, build_vocabularies, compose_text

logger = logging.getLogger(__name__)

# Independent random streams, so changing one knob never reshuffles another stage.
STREAMS = ("traits", "history", "users", "posts", "cascades")


def random_streams(seed: int) -> dict[str, np.random.Generator]:
    children = np.random.SeedSequence(seed).spawn(len(STREAMS))
    return {name: np.random.default_rng(child) for name, child in zip(STREAMS, children)}


def user_ids(n: int) -> list[str]:
    width = max(4, len(str(n - 1)))
    return [f"u{i:0{width}d}" for i in range(n)]


def follow_graph(ids: list[str], attachment: int, reciprocity: float, seed: int) -> nx.DiGraph:
    """Preferential attachment; the newer user follows the older one, sometimes back."""
    graph = nx.DiGraph()
    graph.add_nodes_from(ids)
    n = len(ids)
    if n < 2:
        return graph
    base = nx.barabasi_albert_graph(n, min(attachment, n - 1), seed=seed)
    rng = np.random.default_rng(seed)
    for old, new in sorted(tuple(sorted(edge)) for edge in base.edges()):
        graph.add_edge(ids[new], ids[old])
        if rng.random() < reciprocity:
            graph.add_edge(ids[old], ids[new])
    return graph


@dataclass(frozen=True)
class OriginalMeta:
    hashtag_index: int
    valence: int
    likes: int


@dataclass
class World:
    config: WorldConfig
    vocab: Vocabularies
    ids: list[str]
    graph: nx.DiGraph
    activity: np.ndarray
    popularity: np.ndarray
    interest: np.ndarray
    users: list[UserRecord]
    originals: list[RawPost]
    meta: dict[str, OriginalMeta] = field(default_factory=dict)
    interacted: set[tuple[str, str]] = field(default_factory=set)

    @property
    def index(self) -> dict[str, int]:
        return {uid: i for i, uid in enumerate(self.ids)}

    def corpus(self, reposts: list[RawPost] | None = None) -> Corpus:
        """Corpus of the originals (with cascade counts) and the given reposts."""
        reposts = reposts or []
        counts: dict[str, dict[PostType, int]] = {}
        for post in reposts:
            per = counts.setdefault(post.parent_id or "", {})
            per[post.post_type] = per.get(post.post_type, 0) + 1
        originals = []
        for post in self.originals:
            per = counts.get(post.post_id, {})
            metrics = PostMetrics(
                reposts=per.get(PostType.REPOST, 0),
                quotes=per.get(PostType.QUOTE, 0),
                replies=per.get(PostType.REPLY, 0),
                likes=self.meta[post.post_id].likes,
            )
            originals.append(replace(post, metrics=metrics))
        posts = sorted(originals + list(reposts), key=lambda p: (p.created_at, p.post_id))
        return Corpus(posts, self.users)


def _history_metrics(popularity: float, rng: np.random.Generator) -> PostMetrics:
    lam = np.array([4.0, 1.0, 1.0, 10.0]) * popularity
    reposts, quotes, replies, likes = (int(v) for v in rng.poisson(lam))
    return PostMetrics(reposts=reposts, quotes=quotes, replies=replies, likes=likes)


def _histories(
    config: WorldConfig,
    world_ids: list[str],
    graph: nx.DiGraph,
    vocab: Vocabularies,
    activity: np.ndarray,
    popularity: np.ndarray,
    interest: np.ndarray,
    rng: np.random.Generator,
) -> tuple[list[list[RawPost]], set[tuple[str, str]]]:
    n = len(world_ids)
    tags = config.hashtags
    end = config.start_time
    begin = end - int(config.history_days * SECONDS_PER_DAY)
    keep = 0.2 + 0.8 * activity
    lengths = rng.binomial(config.history_length, keep) if config.history_length else np.zeros(n, dtype=int)
    events: list[tuple[int, int, int]] = []
    for i in range(n):
        stamps = np.sort(rng.integers(begin, end, size=int(lengths[i])))
        events += [(int(t), i, k) for k, t in enumerate(stamps)]
    events.sort()

    histories: list[list[RawPost]] = [[] for _ in range(n)]
    interacted: set[tuple[str, str]] = set()
    followees = [sorted(graph.successors(uid)) for uid in world_ids]
    position = {uid: i for i, uid in enumerate(world_ids)}
    for counter, (t, i, _) in enumerate(events):
        uid = world_ids[i]
        draw, kind, pick, mention_draw = rng.random(4)
        h = int(rng.choice(len(tags), p=interest[i]))
        valence = int(rng.integers(-1, 2))
        text = compose_text(vocab, h, valence, config.tokens_per_post, config.shared_token_share, rng)
        metrics = _history_metrics(float(popularity[i]), rng)
        post_id = f"h{counter:06d}"
        candidates = [
            f for f in followees[i] if histories[position[f]] and histories[position[f]][-1].created_at < t
        ]
        if draw < config.history_repost_share and candidates:
            f = candidates[int(pick * len(candidates))]
            parent = histories[position[f]][-1]
            post_type = PostType.REPOST if kind < 0.6 else PostType.QUOTE if kind < 0.8 else PostType.REPLY
            post = RawPost(
                post_id=post_id,
                author_id=uid,
                created_at=t,
                text=parent.text if post_type == PostType.REPOST else text,
                hashtags=parent.hashtags,
                post_type=post_type,
                parent_id=parent.post_id,
                metrics=metrics,
                mentions=(f,) if post_type == PostType.REPLY else (),
            )
            interacted.add((uid, f))
        else:
            mentions: tuple[str, ...] = ()
            if followees[i] and mention_draw < config.mention_share:
                target = followees[i][int(pick * len(followees[i]))]
                mentions = (target,)
                interacted.add((uid, target))
            post = RawPost(
                post_id=post_id,
                author_id=uid,
                created_at=t,
                text=text,
                hashtags=frozenset({tags[h]}),
                metrics=metrics,
                mentions=mentions,
            )
        histories[i].append(post)
    return histories, interacted


def generate_world(config: WorldConfig) -> World:
    """Users with latent traits, a preferential-attachment follow graph,
    interest-driven histories and the studied original posts. Deterministic in config."""
    streams = random_streams(config.seed)
    ids = user_ids(config.n_users)
    n = len(ids)
    vocab = build_vocabularies(config)
    graph = follow_graph(ids, config.attachment, config.reciprocity, config.seed)

    traits = streams["traits"]
    activity = traits.beta(2.0, 5.0, size=n)
    interest = traits.dirichlet(np.full(config.n_hashtags, config.interest_concentration), size=n)
    indegree = np.array([graph.in_degree(uid) for uid in ids], dtype=np.float64)
    popularity = rankdata(indegree) / n
    age_days = traits.integers(30, 1500, size=n)

    histories, interacted = _histories(
        config, ids, graph, vocab, activity, popularity, interest, streams["history"]
    )

    rng = streams["users"]
    registered_base = config.start_time - int(config.history_days * SECONDS_PER_DAY)
    users: list[UserRecord] = []
    for i, uid in enumerate(ids):
        extra_followers, listed, extra_posts = rng.poisson([popularity[i] * 50, popularity[i] * 5, activity[i] * 2000])
        users.append(
            UserRecord(
                user_id=uid,
                registered_at=int(registered_base - age_days[i] * SECONDS_PER_DAY),
                follower_count=int(graph.in_degree(uid) + extra_followers),
                followee_count=int(graph.out_degree(uid)),
                total_post_count=int(len(histories[i]) + extra_posts),
                listed_count=int(listed),
                verified=bool(popularity[i] >= 0.97),
                profile_url_present=bool(rng.random() < 0.6),
                following=frozenset(graph.successors(uid)),
                history=tuple(histories[i]),
            )
        )

    rng = streams["posts"]
    span = int(config.span_days * SECONDS_PER_DAY)
    drafts: list[tuple[int, int, int, RawPost, OriginalMeta]] = []
    for h, tag in enumerate(config.hashtags):
        weights = activity * (interest[:, h] + 0.05)
        weights = weights / weights.sum()
        for k in range(config.posts_per_hashtag):
            author = int(rng.choice(n, p=weights))
            t = config.start_time + int(rng.integers(0, span))
            valence = int(rng.integers(-1, 2))
            text = compose_text(vocab, h, valence, config.tokens_per_post, config.shared_token_share, rng)
            likes = int(rng.poisson(10.0 * popularity[author]))
            post = RawPost(post_id="pending", author_id=ids[author], created_at=t, text=text, hashtags=frozenset({tag}))
            drafts.append((t, h, k, post, OriginalMeta(h, valence, likes)))
    drafts.sort(key=lambda d: (d[0], d[1], d[2]))
    originals: list[RawPost] = []
    meta: dict[str, OriginalMeta] = {}
    for counter, (_, _, _, post, info) in enumerate(drafts):
        post = replace(post, post_id=f"p{counter:06d}")
        originals.append(post)
        meta[post.post_id] = info

    logger.info(
        "generated world: %d users, %d follow edges, %d history posts, %d originals",
        n,
        graph.number_of_edges(),
        sum(len(h) for h in histories),
        len(originals),
    )
    return World(
        config=config,
        vocab=vocab,
        ids=ids,
        graph=graph,
        activity=activity,
        popularity=popularity,
        interest=interest,
        users=users,
        originals=originals,
        meta=meta,
        interacted=interacted,
    )

