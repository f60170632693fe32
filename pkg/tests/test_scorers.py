from __future__ import annotations

import math

import pytest

from core.scorer import TextScorer
from scorers import REQUIRED_SCORERS, ScorerRegistry, create_scorer, list_available_scorers, load_scorer_class


class _ConstantScorer(TextScorer):
    name = "constant"
    labels = ("a", "b")

    def __init__(self, values: tuple[float, ...]) -> None:
        self.values = values

    def score(self, text: str) -> tuple[float, ...]:
        return self.values


def test_every_required_scorer_is_discoverable() -> None:
    available = list_available_scorers()
    for name in REQUIRED_SCORERS:
        assert name in available
    assert not any(name.startswith("_") for name in available)


def test_default_registry_is_complete() -> None:
    registry = ScorerRegistry.default()
    assert registry.missing() == []
    assert list(registry) == sorted(REQUIRED_SCORERS)
    with pytest.raises(KeyError):
        registry.get("sarcasm")


def test_load_scorer_class_rejects_private_names() -> None:
    with pytest.raises(ValueError):
        load_scorer_class("_keyword")
    assert load_scorer_class("topic-m").__name__ == "TopicMScorer"


def test_registry_accepts_replacements() -> None:
    registry = ScorerRegistry({})
    assert set(registry.missing()) == set(REQUIRED_SCORERS)
    registry.register("grammar", _ConstantScorer((0.5, 0.5)))
    assert "grammar" in registry
    assert registry.get("grammar")("anything") == (0.5, 0.5)


def test_scorer_output_length_is_checked() -> None:
    with pytest.raises(ValueError):
        _ConstantScorer((1.0,))("text")


def test_probability_outputs_stay_in_unit_interval() -> None:
    text = "Furious fans attack the museum, @you should fight them! love it"
    for name in REQUIRED_SCORERS:
        scorer = create_scorer(name)
        values = scorer(text)
        assert len(values) == scorer.outputs
        if name == "emoji":
            assert values[0] == int(values[0]) and values[0] >= 0
            continue
        lower = -1.0 if name == "polarity" else 0.0
        assert all(lower <= v <= 1.0 for v in values), name


def test_emotion_is_a_distribution() -> None:
    values = create_scorer("emotion")("so angry and furious today")
    assert math.isclose(sum(values), 1.0)
    assert values[0] > 0.0
    neutral = create_scorer("emotion")("")
    assert neutral[-1] == 1.0


def test_hate_targeting_needs_aggression() -> None:
    scorer = create_scorer("hate")
    assert scorer("hello @friend, you rock")[2] == 0.0
    assert scorer("I will destroy you @friend")[2] > 0.0


def test_grammar_levels() -> None:
    scorer = create_scorer("grammar")
    clean = scorer("The cat sat on the mat.")
    sloppy = scorer("the the cat sat")
    assert clean[1] == 1.0
    assert sloppy[1] < clean[1]
    assert scorer("") == (1.0, 0.0)


def test_polarity_and_emoji_without_hits() -> None:
    assert create_scorer("polarity")("qwzx vbnm") == (0.0,)
    assert create_scorer("emoji")("qwzx vbnm") == (0.0,)
    assert create_scorer("emoji")("love") == (1.0,)
    assert create_scorer("masculinity")("qwzx") == (0.5,)
