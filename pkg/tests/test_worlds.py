from __future__ import annotations

import pytest

from core.artifacts import FeatureTable
from core.corpus import Corpus
from core.features import feature_dictionary
from dataset.build import LabeledDataset, build_dataset
from dataset.splits import SplitPlan, make_split
from evalkit.experiment import ExperimentSettings, run_experiment
from synthgen import WorldConfig, synthesize
from textfeat.lda import LDAParams
from userfeat.extract import InstanceFeaturizer, fit_topic_model
from conftest import ROOT

pytestmark = pytest.mark.slow

MODELS = ("DT-ALL", "DT-U", "DT-M")
GBDT = {"n_estimators": 60}


def _world(name: str) -> tuple[Corpus, InstanceFeaturizer]:
    corpus = synthesize(WorldConfig.from_yaml(ROOT / "configs" / f"{name}.yaml"))[2]
    return corpus, InstanceFeaturizer(corpus, fit_topic_model(corpus, LDAParams(iters=50)))


def _features(world: tuple[Corpus, InstanceFeaturizer], ratio: str) -> tuple[LabeledDataset, FeatureTable]:
    corpus, featurizer = world
    dataset = build_dataset(corpus, ratio, seed=0, featurizer=featurizer)
    table = FeatureTable(
        names=feature_dictionary("ALL"),
        X=featurizer.transform(dataset.instances, "ALL"),
        labels=dataset.labels,
        hashtags=[inst.hashtag for inst in dataset.instances],
        ids=[inst.instance_id for inst in dataset.instances],
    )
    return dataset, table


@pytest.fixture(scope="module")
def ood_features() -> tuple[LabeledDataset, FeatureTable]:
    """User-driven world over disjoint hashtag vocabularies, 1:5."""
    return _features(_world("world_ood"), "1:5")


def _evaluate(table: FeatureTable, plan: SplitPlan, models: tuple[str, ...], ratio: str) -> dict:
    settings = ExperimentSettings(experiment=plan.protocol, models=models, gbdt=GBDT, ratio_tag=ratio)
    return run_experiment(table, plan, settings, with_importance=False).report


def _mu(report: dict) -> dict[str, float]:
    return {row["name"]: row["overall"]["mu"] for row in report["models"]}


def _wilcoxon_p(report: dict, a: str, b: str) -> float | None:
    row = next(row for row in report["comparisons"] if (row["a"], row["b"]) == (a, b))
    return row["wilcoxon_p"]


def test_user_features_carry_over_to_unseen_hashtags(ood_features) -> None:
    dataset, table = ood_features
    assert len(dataset.hashtags()) == 6
    plan = make_split(dataset, "loho-ood", seed=0, subsets=3)
    mu = _mu(_evaluate(table, plan, ("DT-U", "DT-M"), "1:5"))
    assert mu["DT-U"] - mu["DT-M"] >= 0.30
    assert mu["DT-M"] <= 0.25


def test_in_distribution_ordering(ood_features) -> None:
    dataset, table = ood_features
    plan = make_split(dataset, "mixed-mc", seed=0, repeats=10)
    report = _evaluate(table, plan, MODELS, "1:5")
    assert report["significance_basis"] == "per-fold"
    mu = _mu(report)
    assert mu["DT-ALL"] >= mu["DT-U"] > mu["DT-M"]
    for a in ("DT-ALL", "DT-U"):
        p = _wilcoxon_p(report, a, "DT-M")
        assert p is not None and p < 0.05


def test_f1_falls_as_negatives_grow() -> None:
    world = _world("world_content")
    scores: dict[str, list[float]] = {m: [] for m in MODELS}
    for ratio in ("1:1", "1:5", "1:10"):
        dataset, table = _features(world, ratio)
        assert dataset.label_counts()[1] > 0
        plan = make_split(dataset, "mixed-mc", seed=0, repeats=3)
        for model, mu in _mu(_evaluate(table, plan, MODELS, ratio)).items():
            scores[model].append(mu)
    for model, (one, five, ten) in scores.items():
        assert one > five > ten, model
