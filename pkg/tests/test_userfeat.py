from __future__ import annotations

import math

import networkx as nx
import numpy as np
import pytest

from core.corpus import Corpus
from core.features import feature_dictionary, schema_slice
from core.model import Instance, PostMetrics, PostType, RawPost, UserRecord
from textfeat.lda import LDAParams
from textfeat.post import M_SIZE
from userfeat.cache import FeatureCache, cache_key
from userfeat.extract import FeaturizerConfig, InstanceFeaturizer
from userfeat.graph import FollowGraph, leaderrank
from userfeat.historical import historical_post_features
from userfeat.history import HistorySummary, activity_features, popularity_features
from userfeat.interaction import interaction_features
from userfeat.profile import NetworkContext, account_age_days, profile_features
from conftest import T0

INTERACTION = feature_dictionary("U-HA")[-16:]


def _instance(corpus: Corpus, post_id: str, recipient: str, t: int, label: int = 1) -> Instance:
    post = corpus.posts[post_id]
    return Instance(
        instance_id=Instance.positive_id(post_id, recipient),
        post=post,
        sender=corpus.users[post.author_id],
        recipient=corpus.users[recipient],
        event_time=t,
        hashtag=post.primary_hashtag or "",
        label=label,
    )


def test_follow_graph_from_users(tiny_corpus: Corpus) -> None:
    graph = FollowGraph.from_users(tiny_corpus.users.values())
    assert graph.follows("u4", "u1")
    assert not graph.follows("u1", "u4")
    assert graph.followers("u1") == {"u2", "u3", "u4"}
    assert graph.followers("nobody") == set()
    looped = nx.DiGraph([("a", "a")])
    with pytest.raises(ValueError):
        FollowGraph(looped)


def test_leaderrank_conserves_mass() -> None:
    graph = nx.DiGraph([("a", "b"), ("c", "b"), ("b", "a"), ("d", "c")])
    scores = leaderrank(graph)
    assert math.isclose(sum(scores.values()), 4.0, rel_tol=1e-6)
    assert max(scores, key=scores.get) == "b"


def test_leaderrank_edge_cases() -> None:
    isolated = nx.DiGraph()
    isolated.add_nodes_from(["a", "b", "c"])
    assert leaderrank(isolated) == {"a": 1.0, "b": 1.0, "c": 1.0}
    with pytest.raises(ValueError):
        leaderrank(nx.DiGraph())


def test_activity_and_popularity_of_empty_history() -> None:
    activity = activity_features([])
    assert activity[0] == 0.0
    assert all(math.isnan(v) for v in activity[1:])
    assert all(math.isnan(v) for v in popularity_features([]))


def test_activity_percentages_and_interval() -> None:
    history = [
        RawPost("a", "u", T0, metrics=PostMetrics(reposts=2, likes=4)),
        RawPost("b", "u", T0 + 86400, post_type=PostType.REPOST, parent_id="x"),
        RawPost("c", "u", T0 + 3 * 86400, post_type=PostType.REPLY, parent_id="y", metrics=PostMetrics(replies=3)),
        RawPost("d", "u", T0 + 4 * 86400),
    ]
    size, original, repost, quote, reply, interactive, interval = activity_features(history)
    assert size == 4.0
    assert (original, repost, quote, reply) == (50.0, 25.0, 0.0, 25.0)
    assert interactive == 50.0
    assert math.isclose(interval, 4.0 / 3.0)
    assert popularity_features(history) == (0.5, 0.0, 0.75, 1.0)
    assert math.isnan(activity_features(history[:1])[-1])


def test_indegree_counts_interacting_followers(tiny_corpus: Corpus) -> None:
    context = NetworkContext(tiny_corpus, FollowGraph.from_users(tiny_corpus.users.values()))
    assert context.indegree("u1") == 2
    assert context.indegree("u2") == 0


def test_profile_features(tiny_corpus: Corpus) -> None:
    graph = FollowGraph.from_users(tiny_corpus.users.values())
    context = NetworkContext(tiny_corpus, graph)
    u1, u2 = tiny_corpus.users["u1"], tiny_corpus.users["u2"]
    values = profile_features(u1, u2, graph, T0, context)
    assert len(values) == 15
    assert values[0] == 400.0
    assert values[5] == 1.0
    assert math.isclose(values[6], 3 / 400)
    assert values[-1] == 1.0
    assert profile_features(u2, tiny_corpus.users["u4"], graph, T0, context)[-1] == 0.0
    assert account_age_days(u1, u1.registered_at - 10) == 0.0


def test_interaction_features_with_history(tiny_featurizer: InstanceFeaturizer, tiny_corpus: Corpus) -> None:
    inst = _instance(tiny_corpus, "p1", "u2", T0 + 3600)
    m = tiny_featurizer.post_m(inst.post, inst.hashtag)
    result = interaction_features(
        tiny_featurizer.summary("u1"),
        tiny_featurizer.summary("u2"),
        inst,
        m[29:39],
        tiny_corpus.parent_author,
    )
    values = dict(zip(INTERACTION, result.values))
    assert len(result.values) == 16
    assert values["U-HA_RS_Mention"] == 0.0
    assert values["U-HA_SR_Mention"] == 1.0
    assert values["U-HA_SR_MentionPer"] == 100.0
    assert math.isclose(values["U-HA_RS_RepostLatency"], 3600 / 86400)
    tors = [values[f"U-HA_SR_TORS{k}"] for k in range(1, 11)]
    assert math.isclose(sum(tors), 1.0)
    assert not result.zero_tors


def test_interaction_without_history_sets_unit_path_width(
    tiny_featurizer: InstanceFeaturizer, tiny_corpus: Corpus
) -> None:
    inst = _instance(tiny_corpus, "p2", "u5", T0 + 4000)
    result = interaction_features(
        tiny_featurizer.summary("u2"),
        tiny_featurizer.summary("u5"),
        inst,
        np.full(10, 0.1),
        tiny_corpus.parent_author,
    )
    values = dict(zip(INTERACTION, result.values))
    assert result.zero_tors
    assert values["U-HA_SR_PathWidth"] == 1.0
    assert math.isnan(values["U-HA_RS_MentionPer"])


def test_historical_features_need_both_histories() -> None:
    posts = (RawPost("a", "s", T0),)
    sender = HistorySummary.build("s", posts, np.ones((1, M_SIZE)))
    empty = HistorySummary.build("r", (), np.empty((0, M_SIZE)))
    values = historical_post_features(sender, empty)
    assert values.shape == (2 * M_SIZE + 1,)
    assert np.all(values[:M_SIZE] == 1.0)
    assert np.all(np.isnan(values[M_SIZE:]))
    both = historical_post_features(sender, sender)
    assert math.isclose(both[-1], 1.0)


def test_featurizer_builds_all_vector(tiny_featurizer: InstanceFeaturizer, tiny_corpus: Corpus) -> None:
    inst = _instance(tiny_corpus, "p1", "u2", T0 + 3600)
    row = tiny_featurizer.instance_array(inst)
    assert row.shape == (303,)
    matrix = tiny_featurizer.transform([inst], "U-HA")
    assert np.array_equal(matrix[0], row[schema_slice("U-HA")], equal_nan=True)
    assert tiny_featurizer.vector(inst, "M").names == feature_dictionary("M")
    assert tiny_featurizer.transform([], "U").shape == (0, 225)


def test_strict_causality_truncates_histories(tiny_corpus: Corpus, tiny_topic_model) -> None:
    late = RawPost("h9", "u5", T0 + 5000, "posted after the event")
    users = [u for u in tiny_corpus.users.values() if u.user_id != "u5"]
    users.append(UserRecord("u5", T0 - 50 * 86400, history=(late,)))
    corpus = Corpus(tiny_corpus.posts.values(), users)
    inst = _instance(corpus, "p2", "u5", T0 + 4000)
    strict = InstanceFeaturizer(corpus, tiny_topic_model, config=FeaturizerConfig(strict_causality=True))
    loose = InstanceFeaturizer(corpus, tiny_topic_model)
    size = feature_dictionary("ALL").index("U-HA_R_TweetNum")
    assert strict.instance_array(inst)[size] == 0.0
    assert loose.instance_array(inst)[size] == 1.0


def test_post_feature_cache(tmp_path, tiny_topic_model, tiny_featurizer: InstanceFeaturizer) -> None:
    cache = FeatureCache(tmp_path)
    key = cache_key("abc", LDAParams())
    assert key != cache_key("abd", LDAParams())
    assert cache.load_topic_model(key) is None
    cache.save_topic_model(key, tiny_topic_model)
    assert cache.load_topic_model(key).vocabulary == tiny_topic_model.vocabulary
    tiny_featurizer.precompute(tiny_featurizer.history_requests([]) + [(tiny_featurizer.corpus.posts["p1"], None)])
    cache.save_post_features(key, tiny_featurizer.cached_post_features())
    loaded = cache.load_post_features(key)
    assert set(loaded) == set(tiny_featurizer.cached_post_features())
    assert not FeatureCache(None).enabled
    assert FeatureCache(None).load_post_features(key) == {}
