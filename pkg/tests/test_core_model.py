from __future__ import annotations

import json
import math

import numpy as np
import pytest

from core.artifacts import FeatureTable, RunManifest, content_hash, file_sha256, write_jsonl_records
from core.corpus import Corpus, load_corpus, load_corpus_dir, serialize_corpus
from core.errors import CorpusError, SchemaError
from core.features import (
    SCHEMA_IDS,
    categorical_features,
    dictionary_hash,
    feature_dictionary,
    feature_info,
    schema_for_columns,
    schema_size,
    schema_slice,
)
from core.model import FeatureVector, Instance, PostMetrics, PostType, RawPost, RepostEvent, UserRecord
from conftest import T0


def test_schema_sizes_match_feature_dictionaries() -> None:
    expected = {"M": 78, "U-P": 30, "U-HA": 38, "U-HM": 157, "U": 225, "ALL": 303}
    for schema_id in SCHEMA_IDS:
        names = feature_dictionary(schema_id)
        assert len(names) == expected[schema_id]
        assert len(set(names)) == len(names)
        assert schema_size(schema_id) == expected[schema_id]


def test_all_is_m_followed_by_u() -> None:
    assert feature_dictionary("ALL") == feature_dictionary("M") + feature_dictionary("U")
    assert feature_dictionary("U") == (
        feature_dictionary("U-P") + feature_dictionary("U-HA") + feature_dictionary("U-HM")
    )
    sl = schema_slice("U-HA")
    assert feature_dictionary("ALL")[sl] == feature_dictionary("U-HA")


def test_feature_names_carry_their_schema() -> None:
    assert feature_info("M_hashtag").categorical
    assert "M_hashtag" in categorical_features()
    assert feature_info("U-HA_SR_PathWidth").type == "U-HA"
    with pytest.raises(SchemaError):
        feature_info("M_NoSuchFeature")


def test_schema_for_columns_detects_known_layouts() -> None:
    assert schema_for_columns(feature_dictionary("U-P")) == "U-P"
    assert schema_for_columns(["a", "b"]) is None


def test_dictionary_hash_depends_on_order() -> None:
    names = feature_dictionary("M")
    assert dictionary_hash(names) == dictionary_hash(list(names))
    assert dictionary_hash(names) != dictionary_hash(list(reversed(names)))


def test_raw_post_parent_must_match_type() -> None:
    with pytest.raises(ValueError):
        RawPost("x", "u1", T0, post_type=PostType.REPOST)
    with pytest.raises(ValueError):
        RawPost("x", "u1", T0, parent_id="p1")
    with pytest.raises(ValueError):
        RawPost("x", "u1", 0)
    post = RawPost("x", "u1", T0, hashtags=frozenset({"zeta", "alpha"}))
    assert post.primary_hashtag == "alpha"
    assert not post.is_repost


def test_post_metrics_reject_negative_counts() -> None:
    with pytest.raises(ValueError):
        PostMetrics(reposts=-1)
    assert PostMetrics.from_dict({"likes": 3}).as_tuple() == (0, 0, 0, 3)


def test_user_history_limits_and_cutoff() -> None:
    posts = tuple(RawPost(f"h{i}", "u1", T0 + i) for i in range(51))
    with pytest.raises(ValueError):
        UserRecord("u1", T0, history=posts)
    with pytest.raises(ValueError):
        UserRecord("u1", T0, history=(posts[2], posts[1]))
    user = UserRecord("u1", T0, history=posts[:5])
    assert len(user.history_until(T0 + 2)) == 3
    assert user.history_until(None) == posts[:5]


def test_repost_event_latency_window() -> None:
    original = RawPost("p", "u1", T0)
    assert RepostEvent(original, "u2", T0 + 86400).latency == 86400
    with pytest.raises(ValueError):
        RepostEvent(original, "u2", T0)
    with pytest.raises(ValueError):
        RepostEvent(original, "u2", T0 + 86401)


def test_instance_invariants(tiny_corpus: Corpus) -> None:
    post = tiny_corpus.posts["p1"]
    u1, u2 = tiny_corpus.users["u1"], tiny_corpus.users["u2"]
    inst = Instance(Instance.positive_id("p1", "u2"), post, u1, u2, T0 + 10, "alpha", 1)
    assert inst.instance_id == "p:p1:u2"
    assert inst.pair == ("u1", "u2")
    assert Instance.negative_id("p3", "u2", "p1") == "n:p3:u2:p1"
    with pytest.raises(ValueError):
        Instance("i", post, u1, u2, T0, "alpha", 1)
    with pytest.raises(ValueError):
        Instance("i", post, u2, u1, T0 + 10, "alpha", 0)
    with pytest.raises(ValueError):
        Instance("i", post, u1, u2, T0 + 10, "alpha", 2)


def test_feature_vector_checks_length() -> None:
    with pytest.raises(ValueError):
        FeatureVector("M", (0.0,) * 77)
    vec = FeatureVector.from_array("U-P", np.r_[np.zeros(29), math.nan])
    assert vec.missing_count() == 1
    assert list(vec.as_dict())[0] == feature_dictionary("U-P")[0]


def test_corpus_lookups(tiny_corpus: Corpus) -> None:
    assert tiny_corpus.hashtags() == ["alpha", "beta"]
    assert "h1" in tiny_corpus.known_posts
    assert tiny_corpus.parent_author(tiny_corpus.users["u2"].history[0]) == "u1"
    assert tiny_corpus.reposted_by("u2") == {"p1"}
    assert tiny_corpus.max_timestamp() == T0 + 200_000
    with pytest.raises(CorpusError):
        Corpus([RawPost("a", "u1", T0), RawPost("a", "u1", T0 + 1)], [])


def test_corpus_round_trip_is_canonical(tiny_corpus: Corpus, tmp_path) -> None:
    serialize_corpus(tiny_corpus, tmp_path / "posts.jsonl", tmp_path / "users.jsonl")
    first = content_hash([tmp_path / "posts.jsonl", tmp_path / "users.jsonl"])
    reloaded = load_corpus_dir(tmp_path)
    assert set(reloaded.posts) == set(tiny_corpus.posts)
    assert reloaded.users["u1"].history[0].mentions == ("u2",)
    serialize_corpus(reloaded, tmp_path / "posts.jsonl", tmp_path / "users.jsonl")
    assert content_hash([tmp_path / "posts.jsonl", tmp_path / "users.jsonl"]) == first


def test_load_corpus_reports_line_numbers(tmp_path) -> None:
    posts = tmp_path / "posts.jsonl"
    users = tmp_path / "users.jsonl"
    posts.write_text('{"post_id": "a", "author_id": "u1", "created_at": 5}\n{not json}\n', encoding="utf-8")
    users.write_text("", encoding="utf-8")
    with pytest.raises(CorpusError) as info:
        load_corpus(posts, users)
    assert info.value.line_no == 2
    with pytest.raises(FileNotFoundError):
        load_corpus(tmp_path / "missing.jsonl", users)


def test_load_corpus_warns_on_dangling_references(tmp_path) -> None:
    posts = tmp_path / "posts.jsonl"
    users = tmp_path / "users.jsonl"
    record = {"post_id": "r", "author_id": "u9", "created_at": 5, "post_type": "repost", "parent_id": "gone"}
    posts.write_text(json.dumps(record) + "\n", encoding="utf-8")
    users.write_text("", encoding="utf-8")
    corpus = load_corpus(posts, users)
    assert len(corpus.report.warnings) == 2


def test_feature_table_csv_round_trip(tmp_path) -> None:
    names = feature_dictionary("U-P")
    X = np.arange(60, dtype=np.float64).reshape(2, 30)
    X[1, 3] = math.nan
    table = FeatureTable(names, X, np.array([1, 0]), ["alpha", "beta"], ["p:a:b", "n:c:b:a"])
    path = table.to_csv(tmp_path / "features.csv")
    loaded = FeatureTable.from_csv(path)
    assert loaded.names == names
    assert loaded.dictionary_hash == dictionary_hash(names)
    assert math.isnan(loaded.X[1, 3])
    rows, labels = loaded.subset(["n:c:b:a"])
    assert labels.tolist() == [0]
    assert rows[0, 0] == 30.0


def test_feature_table_csv_keeps_every_bit(tmp_path) -> None:
    names = feature_dictionary("U-P")
    X = np.random.default_rng(11).normal(size=(50, 30)) * 1e3
    X[0, :3] = [0.1 + 0.2, 1 / 3, 5e-324]
    ids = [f"i{k}" for k in range(50)]
    table = FeatureTable(names, X, np.zeros(50, dtype=np.int64), ["alpha"] * 50, ids)
    loaded = FeatureTable.from_csv(table.to_csv(tmp_path / "features.csv"))
    assert np.array_equal(loaded.X, X)


def test_manifest_records_input_hashes(tmp_path) -> None:
    data = write_jsonl_records(tmp_path / "rows.jsonl", [{"b": 1, "a": 2}])
    assert data.read_text(encoding="utf-8") == '{"a":2,"b":1}\n'
    manifest = RunManifest(command="synth", config={"seed": 1}, seeds={"world": 1})
    manifest.add_input("rows", data)
    out = manifest.write(tmp_path / "manifest.json")
    payload = json.loads(out.read_text(encoding="utf-8"))
    assert payload["inputs"]["rows"] == file_sha256(data)
    assert "timestamp" not in payload
