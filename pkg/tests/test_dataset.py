from __future__ import annotations

import numpy as np
import pytest

from core.corpus import Corpus
from core.errors import ConfigError, SamplingError, SchemaError
from core.model import Instance, PostType, RawPost, RepostEvent
from dataset.build import LabeledDataset, build_dataset
from dataset.leakage import leakage_filter
from dataset.negatives import (
    GENERAL_ANCHOR,
    CandidateIndex,
    general_negatives,
    negative_pool,
    random_negatives,
    select_negatives,
)
from dataset.positives import scan_positives
from conftest import T0


def _event(corpus: Corpus, post_id: str, recipient: str, t: int) -> RepostEvent:
    return RepostEvent(original=corpus.posts[post_id], recipient_id=recipient, repost_time=t)


def _post_at(post_id: str, author: str, t: int, tag: str) -> RawPost:
    return RawPost(post_id=post_id, author_id=author, created_at=t, text="", hashtags=frozenset({tag}))


def test_scan_counts_every_skip_reason(tiny_corpus: Corpus) -> None:
    scan = scan_positives(tiny_corpus)
    pairs = [(e.original.post_id, e.recipient_id) for e in scan.events]
    assert pairs == [("p1", "u2"), ("p2", "u5"), ("p4", "u1"), ("p1", "u3")]
    assert scan.duplicates == 1
    assert scan.self_reposts == 1
    assert scan.out_of_window == 1
    assert scan.missing_parent == 0
    assert scan.events[0].repost_id == "r1"


def test_scan_counts_missing_parents(tiny_corpus: Corpus) -> None:
    orphan = RawPost("r9", "u3", T0 + 50, post_type=PostType.REPOST, parent_id="gone")
    corpus = Corpus([*tiny_corpus.posts.values(), orphan], tiny_corpus.users.values())
    assert scan_positives(corpus).missing_parent == 1


def test_negative_pools_follow_the_window_rules(tiny_corpus: Corpus) -> None:
    index = CandidateIndex(tiny_corpus)

    def pool(post_id: str, recipient: str, t: int) -> list[str]:
        event = _event(tiny_corpus, post_id, recipient, t)
        return [p.post_id for p in negative_pool(event, tiny_corpus, index)]

    assert pool("p1", "u2", T0 + 3600) == ["p3"]
    assert pool("p1", "u3", T0 + 7200) == ["p2"]
    assert pool("p2", "u5", T0 + 4000) == ["p1", "p3"]
    assert pool("p4", "u1", T0 + 5000) == []
    # p2 and p3 were created after this repost
    assert pool("p1", "u5", T0 + 300) == []


def test_select_negatives_reports_deficit(tiny_featurizer, tiny_corpus: Corpus) -> None:
    event = _event(tiny_corpus, "p2", "u5", T0 + 4000)
    pool = negative_pool(event, tiny_corpus)
    one = select_negatives(event, pool, 1, tiny_featurizer.similarity_vector, tiny_corpus)
    assert one.deficit == 0
    assert one.instances[0].post.post_id in {"p1", "p3"}
    assert one.instances[0].label == 0
    assert one.instances[0].event_time == T0 + 4000
    five = select_negatives(event, pool, 5, tiny_featurizer.similarity_vector, tiny_corpus)
    assert five.deficit == 3
    assert [i.instance_id for i in five.instances][0] == one.instances[0].instance_id


def test_negative_window_matches_positive_latency(tiny_corpus: Corpus) -> None:
    t = T0 + 3600
    edge = _post_at("e0", "u4", t - 86400, "alpha")
    same_second = _post_at("e1", "u4", t, "alpha")
    corpus = Corpus([*tiny_corpus.posts.values(), edge, same_second], tiny_corpus.users.values())
    ids = [p.post_id for p in negative_pool(_event(corpus, "p1", "u2", t), corpus)]
    assert "e0" in ids
    assert "e1" not in ids


def test_random_negatives_skip_chosen_posts(tiny_corpus: Corpus) -> None:
    index = CandidateIndex(tiny_corpus)
    event = _event(tiny_corpus, "p2", "u5", T0 + 4000)
    extra = random_negatives(event, 1, {"p1", "p4"}, index, np.random.default_rng(0))
    assert [i.post.post_id for i in extra.instances] == ["p3"]
    short = random_negatives(event, 4, set(), index, np.random.default_rng(0))
    assert short.deficit == 1


def test_random_negatives_reach_beyond_the_hashtag_window(tiny_corpus: Corpus) -> None:
    old = _post_at("o1", "u3", T0 - 3 * 86400, "alpha")
    corpus = Corpus([*tiny_corpus.posts.values(), old], tiny_corpus.users.values())
    index = CandidateIndex(corpus)
    event = _event(corpus, "p2", "u5", T0 + 4000)
    assert [p.post_id for p in negative_pool(event, corpus, index)] == ["p1", "p3"]
    extra = random_negatives(event, 2, {"p1", "p3"}, index, np.random.default_rng(0))
    picked = {i.post.post_id: i.hashtag for i in extra.instances}
    # p4 is a beta post, o1 predates the 24h window
    assert picked == {"o1": "alpha", "p4": "beta"}
    assert extra.deficit == 0
    for inst in extra.instances:
        assert inst.post.created_at < inst.event_time
        assert inst.recipient.user_id == "u5"


def test_general_negatives_are_causal_and_unobserved(tiny_corpus: Corpus) -> None:
    events = scan_positives(tiny_corpus).events
    negatives = general_negatives(tiny_corpus, events, 1, seed=4)
    assert len(negatives) == len(events)
    observed = {(p.parent_id, p.author_id) for p in tiny_corpus.posts.values() if p.parent_id}
    for inst in negatives:
        assert inst.instance_id.endswith(f":{GENERAL_ANCHOR}")
        assert inst.event_time > inst.post.created_at
        assert inst.recipient.user_id != inst.sender.user_id
        assert (inst.post.post_id, inst.recipient.user_id) not in observed
    again = general_negatives(tiny_corpus, events, 1, seed=4)
    assert [i.instance_id for i in again] == [i.instance_id for i in negatives]


def test_general_negatives_give_up_after_the_draw_budget(tiny_corpus: Corpus) -> None:
    events = scan_positives(tiny_corpus).events[:1]
    with pytest.raises(SamplingError):
        general_negatives(tiny_corpus, events, 12, seed=0)


def test_build_one_to_one(tiny_featurizer, tiny_corpus: Corpus) -> None:
    dataset = build_dataset(tiny_corpus, "1:1", seed=7, featurizer=tiny_featurizer)
    assert dataset.label_counts() == {0: 3, 1: 3}
    ids = [i.instance_id for i in dataset.instances]
    assert ids[0] == "p:p1:u2"
    assert ids[1] == "n:p3:u2:p1"
    assert "p:p4:u1" not in ids
    assert "n:p2:u3:p1" in ids
    assert dataset.report.empty_pool == 1
    assert dataset.report.deficit == 0
    assert dataset.report.scan["positives"] == 4
    assert dataset.hashtags() == ["alpha"]
    for inst in dataset.instances:
        if inst.label == 0:
            assert inst.post.created_at < inst.event_time


def test_build_is_deterministic(tiny_featurizer, tiny_corpus: Corpus) -> None:
    a = build_dataset(tiny_corpus, "1:1", seed=7, featurizer=tiny_featurizer)
    b = build_dataset(tiny_corpus, "1:1", seed=7, featurizer=tiny_featurizer)
    assert a.to_dict() == b.to_dict()


def test_larger_ratios_drop_short_pools(tiny_featurizer, tiny_corpus: Corpus) -> None:
    for tag in ("1:5", "1:10"):
        dataset = build_dataset(tiny_corpus, tag, seed=1, featurizer=tiny_featurizer)
        assert len(dataset) == 0
        assert dataset.report.deficit == 3
        assert dataset.report.empty_pool == 1


def test_unknown_ratio_tag(tiny_corpus: Corpus) -> None:
    with pytest.raises(ConfigError):
        build_dataset(tiny_corpus, "2:1", seed=0)


def test_dataset_round_trip(tiny_featurizer, tiny_corpus: Corpus) -> None:
    dataset = build_dataset(tiny_corpus, "1:1", seed=7, featurizer=tiny_featurizer)
    restored = LabeledDataset.from_dict(dataset.to_dict(), tiny_corpus)
    assert [i.instance_id for i in restored.instances] == [i.instance_id for i in dataset.instances]
    assert restored.report.empty_pool == 1
    with pytest.raises(SchemaError):
        LabeledDataset.from_dict({**dataset.to_dict(), "format": 99}, tiny_corpus)
    broken = dataset.to_dict()
    broken["instances"][0]["post_id"] = "nope"
    with pytest.raises(SchemaError):
        LabeledDataset.from_dict(broken, tiny_corpus)


def test_leakage_filter_removes_shared_pairs(tiny_corpus: Corpus) -> None:
    u = tiny_corpus.users
    p1, p2 = tiny_corpus.posts["p1"], tiny_corpus.posts["p2"]
    train = [
        Instance("a", p1, u["u1"], u["u2"], T0 + 10, "alpha", 1),
        Instance("b", p2, u["u2"], u["u3"], T0 + 700, "alpha", 0),
        Instance("c", p1, u["u1"], u["u4"], T0 + 10, "alpha", 0),
    ]
    test = [Instance("d", p1, u["u1"], u["u2"], T0 + 20, "alpha", 0)]
    kept, removed = leakage_filter(train, test)
    assert [i.instance_id for i in kept] == ["b", "c"]
    assert removed == 1
    assert leakage_filter([], test) == ([], 0)
