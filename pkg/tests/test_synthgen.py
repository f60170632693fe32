from __future__ import annotations

from dataclasses import replace

import pytest

from core.config import REPOST_WINDOW_SECONDS
from core.errors import ConfigError
from core.model import PostType
from synthgen import WorldConfig, generate_cascades, generate_world, synthesize
from synthgen.vocab import build_vocabularies, made_up_word
from textfeat.lda import lda_tokens


def _posts(corpus) -> list[tuple]:
    return [(p.post_id, p.author_id, p.created_at, p.text, p.parent_id) for p in corpus.posts.values()]


def test_made_up_words() -> None:
    assert made_up_word(0) == "bababa"
    assert made_up_word(1) == "bababe"
    words = {made_up_word(i) for i in range(500)}
    assert len(words) == 500
    with pytest.raises(ValueError):
        made_up_word(-1)
    with pytest.raises(ValueError):
        made_up_word(70**3)


def test_config_validation() -> None:
    with pytest.raises(ConfigError):
        WorldConfig(n_users=0)
    with pytest.raises(ConfigError):
        WorldConfig(reciprocity=1.5)
    with pytest.raises(ConfigError):
        WorldConfig(base_rate=float("nan"))
    with pytest.raises(ConfigError):
        WorldConfig.from_dict({"users": 10})
    assert WorldConfig(n_hashtags=12).hashtags[:2] == ["topic00", "topic01"]


def test_config_from_yaml(tmp_path) -> None:
    path = tmp_path / "run.yaml"
    path.write_text("world:\n  n_users: 30\n  seed: 9\ndataset:\n  ratio: '1:5'\n", encoding="utf-8")
    config = WorldConfig.from_yaml(path)
    assert (config.n_users, config.seed) == (30, 9)
    flat = tmp_path / "flat.yaml"
    flat.write_text(config.to_yaml(), encoding="utf-8")
    assert WorldConfig.from_yaml(flat) == config
    bad = tmp_path / "bad.yaml"
    bad.write_text("- 1\n- 2\n", encoding="utf-8")
    with pytest.raises(ConfigError):
        WorldConfig.from_yaml(bad)
    with pytest.raises(FileNotFoundError):
        WorldConfig.from_yaml(tmp_path / "missing.yaml")


def test_synthesis_is_deterministic(small_world_config: WorldConfig) -> None:
    _, cascades_a, corpus_a = synthesize(small_world_config)
    _, cascades_b, corpus_b = synthesize(small_world_config)
    assert _posts(corpus_a) == _posts(corpus_b)
    assert [e.to_dict() for e in cascades_a.exposures] == [e.to_dict() for e in cascades_b.exposures]
    _, _, other = synthesize(replace(small_world_config, seed=4))
    assert _posts(other) != _posts(corpus_a)


def test_world_shape(small_world_config: WorldConfig) -> None:
    world = generate_world(small_world_config)
    assert len(world.ids) == 60
    assert len(world.originals) == 2 * 10
    assert all(len(u.history) <= small_world_config.history_length for u in world.users)
    assert not any(world.graph.has_edge(u, u) for u in world.ids)
    assert {next(iter(p.hashtags)) for p in world.originals} == set(small_world_config.hashtags)


def test_reposts_reference_earlier_originals(small_world_config: WorldConfig) -> None:
    world, cascades, corpus = synthesize(small_world_config)
    for post in cascades.reposts:
        parent = corpus.posts[post.parent_id]
        assert post.author_id != parent.author_id
        assert 0 < post.created_at - parent.created_at <= REPOST_WINDOW_SECONDS
        if post.post_type == PostType.REPLY:
            assert post.mentions == (parent.author_id,)
    assert 0.0 <= cascades.repost_rate <= 1.0
    originals = [corpus.posts[p.post_id] for p in world.originals]
    total = sum(p.metrics.reposts + p.metrics.quotes + p.metrics.replies for p in originals)
    assert total == len(cascades.reposts)


def test_strict_vocabularies_are_disjoint(small_world_config: WorldConfig) -> None:
    vocab = build_vocabularies(small_world_config)
    assert vocab.shared == ()
    assert not vocab.tokens_of(0) & vocab.tokens_of(1)
    world = generate_world(small_world_config)
    for post in world.originals:
        h = world.meta[post.post_id].hashtag_index
        assert set(lda_tokens(post.text)) <= vocab.tokens_of(h)
    loose = build_vocabularies(replace(small_world_config, ood_strict=False))
    assert len(loose.shared) == small_world_config.shared_vocab_size
    assert loose.positive[0] == loose.positive[1]


def test_higher_base_rate_only_adds_reposts(small_world_config: WorldConfig) -> None:
    low_config = replace(small_world_config, base_rate=-4.0)
    high_config = replace(small_world_config, base_rate=0.0)
    low = generate_cascades(generate_world(low_config), low_config)
    high = generate_cascades(generate_world(high_config), high_config)
    chosen_low = {(e.post_id, e.user_id) for e in low.exposures if e.reposted}
    chosen_high = {(e.post_id, e.user_id) for e in high.exposures if e.reposted}
    assert chosen_low <= chosen_high
    assert len(chosen_high) > len(chosen_low)
    assert [(e.post_id, e.user_id) for e in low.exposures] == [(e.post_id, e.user_id) for e in high.exposures]
