"""Train every model on every fold, persist predictions, and summarise them.

The report is a pure function of the persisted fold predictions, so it can be
rebuilt byte-for-byte without retraining.
"""

from __future__ import annotations

import logging
import os
import pickle
from concurrent.futures import ProcessPoolExecutor, as_completed
from concurrent.futures.process import BrokenProcessPool
from dataclasses import dataclass, field
from typing import Any, Mapping, Sequence

import numpy as np

from core.artifacts import FeatureTable
from core.config import CLASSIFICATION_THRESHOLD
from core.errors import ConfigError, SchemaError
from core.features import feature_info
from core.learner import Learner
from dataset.splits import Fold, SplitPlan
from evalkit.metrics import FoldScores, aggregate_scores, f1
from evalkit.stats import paired_t_test, wilcoxon_signed_rank
from learners import create_learner
from learners._bow import BowEncoder
from learners._search import grid_search, named_grid
from learners.gbdt import GBDTParams
from learners.mlp import MLPParams

logger = logging.getLogger(__name__)

REPORT_FORMAT = 1
PREDICTIONS_FORMAT = 1

# Worker start-up or transport problems; anything else is a fold failure.
_POOL_FAILURES = (BrokenProcessPool, OSError, pickle.PicklingError)


@dataclass(frozen=True)
class ModelSpec:
    """A named learner/input combination; schema None means bag-of-words only."""

    name: str
    learner: str
    schema: str | None
    bow: bool = False


MODEL_SPECS: dict[str, ModelSpec] = {
    spec.name: spec
    for spec in (
        ModelSpec("DT-ALL", "gbdt", "ALL"),
        ModelSpec("DT-U", "gbdt", "U"),
        ModelSpec("DT-M", "gbdt", "M"),
        ModelSpec("DT-U-P", "gbdt", "U-P"),
        ModelSpec("DT-U-HA", "gbdt", "U-HA"),
        ModelSpec("DT-U-HM", "gbdt", "U-HM"),
        ModelSpec("NN-ALL", "mlp", "ALL", bow=True),
        ModelSpec("NN-U", "mlp", "U"),
        ModelSpec("NN-M", "mlp", None, bow=True),
        ModelSpec("RANDOM", "random_guess", None),
    )
}
DEFAULT_MODELS = ("DT-ALL", "DT-U", "DT-M")
DEFAULT_COMPARISONS = (
    ("DT-U", "DT-M"),
    ("DT-ALL", "DT-M"),
    ("DT-ALL", "DT-U"),
    ("NN-U", "NN-M"),
    ("NN-ALL", "NN-M"),
)


def model_spec(name: str) -> ModelSpec:
    try:
        return MODEL_SPECS[name]
    except KeyError:
        raise ConfigError(f"unknown model {name!r} (expected one of {', '.join(MODEL_SPECS)})") from None


@dataclass(frozen=True)
class ExperimentSettings:
    experiment: str = "experiment"
    models: tuple[str, ...] = DEFAULT_MODELS
    comparisons: tuple[tuple[str, str], ...] | None = None
    gbdt: dict[str, Any] = field(default_factory=dict)
    mlp: dict[str, Any] = field(default_factory=dict)
    grid: str | None = None
    ratio_tag: str = "1:1"
    seed: int = 0
    jobs: int = 1

    def __post_init__(self) -> None:
        for name in self.models:
            model_spec(name)
        if not self.models:
            raise ConfigError("at least one model is required")

    def resolved_comparisons(self) -> list[tuple[str, str]]:
        pairs = DEFAULT_COMPARISONS if self.comparisons is None else self.comparisons
        return [(a, b) for a, b in pairs if a in self.models and b in self.models]


@dataclass(frozen=True)
class FoldPrediction:
    model: str
    fold: int
    group: str
    ids: tuple[str, ...]
    labels: tuple[int, ...]
    scores: tuple[float, ...]
    params: dict[str, Any] = field(default_factory=dict)

    def f1(self) -> float:
        predicted = (np.asarray(self.scores) >= CLASSIFICATION_THRESHOLD).astype(np.int64)
        return f1(self.labels, predicted)

    def to_dict(self) -> dict[str, Any]:
        return {
            "model": self.model,
            "fold": self.fold,
            "group": self.group,
            "ids": list(self.ids),
            "labels": list(self.labels),
            "scores": list(self.scores),
            "params": self.params,
        }

    @classmethod
    def from_dict(cls, data: dict[str, Any]) -> "FoldPrediction":
        return cls(
            model=str(data["model"]),
            fold=int(data["fold"]),
            group=str(data["group"]),
            ids=tuple(data["ids"]),
            labels=tuple(int(v) for v in data["labels"]),
            scores=tuple(float(v) for v in data["scores"]),
            params=dict(data.get("params", {})),
        )


def _instance_texts(ids: Sequence[str], texts: Mapping[str, str]) -> list[str]:
    try:
        return [texts[i] for i in ids]
    except KeyError as exc:
        raise SchemaError(f"no post text for instance {exc.args[0]!r}") from None


def _fold_matrices(
    spec: ModelSpec,
    table: FeatureTable,
    fold: Fold,
    texts: Mapping[str, str] | None,
) -> tuple[list[str], dict[str, tuple[np.ndarray, np.ndarray]]]:
    parts = {"train": fold.train, "val": fold.val, "test": fold.test}
    names: list[str] = []
    blocks: dict[str, list[np.ndarray]] = {k: [] for k in parts}
    labels = {k: table.subset(ids)[1] for k, ids in parts.items()}
    if spec.schema is not None:
        view = table.select(spec.schema)
        names += view.names
        for k, ids in parts.items():
            blocks[k].append(view.subset(ids)[0])
    if spec.bow:
        if texts is None:
            raise ConfigError(f"model {spec.name} needs post texts for its bag-of-words input")
        encoder = BowEncoder().fit(_instance_texts(fold.train, texts))
        names += encoder.column_names()
        for k, ids in parts.items():
            blocks[k].append(encoder.transform(_instance_texts(ids, texts)))
    matrices = {
        k: (np.hstack(blocks[k]) if blocks[k] else np.zeros((len(parts[k]), 0)), labels[k]) for k in parts
    }
    return names, matrices


def _new_learner(spec: ModelSpec, settings: ExperimentSettings) -> Learner:
    if spec.learner == "gbdt":
        return create_learner("gbdt", params=GBDTParams.from_dict({"seed": settings.seed, **settings.gbdt}))
    if spec.learner == "mlp":
        return create_learner("mlp", params=MLPParams.from_dict({"seed": settings.seed, **settings.mlp}))
    return create_learner(spec.learner, seed=settings.seed)


def fit_learner(
    spec: ModelSpec,
    names: Sequence[str],
    train: tuple[np.ndarray, np.ndarray],
    val: tuple[np.ndarray, np.ndarray] | None,
    settings: ExperimentSettings,
) -> tuple[Learner, dict[str, Any]]:
    """Fit one model, grid-searching tree parameters first when settings.grid is set.

    Returns the fitted learner and the grid point it was trained with ({} without a grid).
    """
    learner = _new_learner(spec, settings)
    chosen: dict[str, Any] = {}
    if settings.grid and spec.learner == "gbdt":
        if val is None:
            logger.warning("no validation part; skipping the %s grid for %s", settings.grid, spec.name)
        else:
            search = grid_search(train, val, named_grid(settings.grid, settings.ratio_tag), learner, list(names))
            chosen = search.best
            learner = learner.with_params(**chosen)
    learner.feature_names = list(names)
    learner.fit(train[0], train[1], val=val)
    return learner, chosen


def train_fold(
    spec: ModelSpec,
    table: FeatureTable,
    fold: Fold,
    fold_index: int,
    settings: ExperimentSettings,
    texts: Mapping[str, str] | None = None,
) -> FoldPrediction:
    names, mats = _fold_matrices(spec, table, fold, texts)
    X_val, y_val = mats["val"]
    val = (X_val, y_val) if X_val.shape[0] else None
    learner, chosen = fit_learner(spec, names, mats["train"], val, settings)
    X_test, y_test = mats["test"]
    scores = learner.predict_proba(X_test)
    return FoldPrediction(
        model=spec.name,
        fold=fold_index,
        group=fold.group,
        ids=tuple(fold.test),
        labels=tuple(int(v) for v in y_test),
        scores=tuple(float(s) for s in scores),
        params=chosen,
    )


# Worker-process state, set once per worker by _init_worker.
_WORKER: dict[str, Any] = {}


def _init_worker(table: FeatureTable, plan: SplitPlan, settings: ExperimentSettings, texts) -> None:
    _WORKER.update(table=table, plan=plan, settings=settings, texts=texts)


def _run_task(model: str, fold_index: int) -> FoldPrediction:
    plan: SplitPlan = _WORKER["plan"]
    return train_fold(
        model_spec(model),
        _WORKER["table"],
        plan.folds[fold_index],
        fold_index,
        _WORKER["settings"],
        _WORKER["texts"],
    )


def _run_sequential(
    tasks: list[tuple[str, int]],
    table: FeatureTable,
    plan: SplitPlan,
    settings: ExperimentSettings,
    texts: Mapping[str, str] | None,
) -> list[FoldPrediction]:
    out: list[FoldPrediction] = []
    for i, (model, fold_index) in enumerate(tasks, start=1):
        fold = plan.folds[fold_index]
        try:
            out.append(train_fold(model_spec(model), table, fold, fold_index, settings, texts))
        except Exception as exc:
            raise RuntimeError(
                f"fold {fold_index} (group {fold.group}) of {model} failed ({type(exc).__name__}: {exc})"
            ) from exc
        logger.info("[%d/%d] done %s fold %d (%s)", i, len(tasks), model, fold_index, fold.group)
    return out


def run_folds(
    table: FeatureTable,
    plan: SplitPlan,
    settings: ExperimentSettings,
    texts: Mapping[str, str] | None = None,
) -> list[FoldPrediction]:
    """Predictions for every (model, fold), ordered by model then fold."""
    if not plan.folds:
        raise ConfigError("split plan has no folds")
    tasks = [(model, i) for model in settings.models for i in range(len(plan.folds))]
    workers = max(1, min(settings.jobs, len(tasks), os.cpu_count() or 1))
    if workers <= 1:
        return _run_sequential(tasks, table, plan, settings, texts)

    indexed: dict[tuple[str, int], FoldPrediction] = {}
    try:
        with ProcessPoolExecutor(
            max_workers=workers,
            initializer=_init_worker,
            initargs=(table, plan, settings, texts),
        ) as pool:
            future_map = {pool.submit(_run_task, model, i): (model, i) for model, i in tasks}
            done = 0
            for fut in as_completed(future_map):
                model, i = future_map[fut]
                try:
                    indexed[(model, i)] = fut.result()
                except _POOL_FAILURES:
                    raise
                except Exception as exc:
                    pool.shutdown(wait=False, cancel_futures=True)
                    raise RuntimeError(
                        f"fold {i} (group {plan.folds[i].group}) of {model} failed "
                        f"({type(exc).__name__}: {exc})"
                    ) from exc
                done += 1
                logger.info("[%d/%d] done %s fold %d", done, len(tasks), model, i)
        return [indexed[task] for task in tasks]
    except _POOL_FAILURES as exc:
        logger.warning(
            "fold workers unavailable (%s: %s); falling back to sequential execution",
            type(exc).__name__,
            exc,
        )
        return _run_sequential(tasks, table, plan, settings, texts)


def importance_on_all(
    table: FeatureTable, settings: ExperimentSettings, model: str = "DT-ALL"
) -> list[dict[str, Any]]:
    """Gain importance of a tree model trained on every instance of the table."""
    spec = model_spec(model)
    if spec.learner != "gbdt" or spec.schema is None:
        raise ConfigError(f"importance needs a tree model over features, got {model}")
    view = table.select(spec.schema)
    learner = _new_learner(spec, settings)
    learner.feature_names = list(view.names)
    learner.fit(view.X, view.labels)
    return importance_records(learner.feature_importance())


def importance_records(weights: Mapping[str, float]) -> list[dict[str, Any]]:
    ranked = sorted(weights.items(), key=lambda kv: (-kv[1], kv[0]))
    records = []
    for name, weight in ranked:
        info = feature_info(name) if not name.startswith("BOW_") else None
        records.append(
            {
                "feature": name,
                "weight": float(weight),
                "type": info.type if info else "BOW",
                "subtype": info.subtype if info else "bag-of-words",
            }
        )
    return records


def _group_scores(predictions: Sequence[FoldPrediction], model: str) -> list[FoldScores]:
    by_group: dict[str, list[tuple[int, float]]] = {}
    for pred in predictions:
        if pred.model == model:
            by_group.setdefault(pred.group, []).append((pred.fold, pred.f1()))
    return [
        FoldScores(group=group, folds=tuple(score for _, score in sorted(rows)))
        for group, rows in by_group.items()
    ]


def _compare(a: list[FoldScores], b: list[FoldScores]) -> dict[str, Any]:
    """Pair per-group means when there are several groups, per-fold scores otherwise."""
    if len(a) > 1:
        basis = "per-group"
        lookup = {g.group: g.mu for g in b}
        xs = [g.mu for g in a if g.group in lookup]
        ys = [lookup[g.group] for g in a if g.group in lookup]
    else:
        basis = "per-fold"
        xs = list(a[0].folds) if a else []
        ys = list(b[0].folds) if b else []
        n = min(len(xs), len(ys))
        xs, ys = xs[:n], ys[:n]
    out: dict[str, Any] = {"basis": basis, "n": len(xs), "t_p": None, "wilcoxon_p": None}
    if len(xs) >= 2:
        t = paired_t_test(xs, ys)
        out["t_p"] = t.p_value if t.defined else None
        try:
            out["wilcoxon_p"] = wilcoxon_signed_rank(xs, ys).p_value
        except ValueError as exc:
            logger.info("wilcoxon undefined: %s", exc)
    return out


def build_report(
    predictions: Sequence[FoldPrediction],
    *,
    experiment: str,
    protocol: str,
    comparisons: Sequence[tuple[str, str]] = (),
    importance: Sequence[dict[str, Any]] = (),
) -> dict[str, Any]:
    models: list[str] = []
    for pred in predictions:
        if pred.model not in models:
            models.append(pred.model)
    scores = {m: _group_scores(predictions, m) for m in models}
    model_rows = []
    for m in models:
        mu, sigma = aggregate_scores(scores[m])
        model_rows.append(
            {
                "name": m,
                "per_group": [g.to_dict() for g in scores[m]],
                "overall": {"mu": mu, "sigma": sigma},
            }
        )
    comparison_rows = []
    for a, b in comparisons:
        if a in scores and b in scores:
            comparison_rows.append({"a": a, "b": b, **_compare(scores[a], scores[b])})
    bases = sorted({row["basis"] for row in comparison_rows})
    return {
        "format": REPORT_FORMAT,
        "experiment": experiment,
        "protocol": protocol,
        "threshold": CLASSIFICATION_THRESHOLD,
        "significance_basis": bases[0] if len(bases) == 1 else ("mixed" if bases else None),
        "models": model_rows,
        "comparisons": comparison_rows,
        "importance": list(importance),
    }


def predictions_to_dict(
    predictions: Sequence[FoldPrediction],
    experiment: str,
    protocol: str,
    comparisons: Sequence[tuple[str, str]] = (),
    importance: Sequence[dict[str, Any]] = (),
) -> dict[str, Any]:
    """Everything build_report needs, so reports can be regenerated without retraining."""
    return {
        "format": PREDICTIONS_FORMAT,
        "experiment": experiment,
        "protocol": protocol,
        "comparisons": [list(pair) for pair in comparisons],
        "importance": list(importance),
        "predictions": [p.to_dict() for p in predictions],
    }


def predictions_from_dict(data: dict[str, Any]) -> list[FoldPrediction]:
    if data.get("format") != PREDICTIONS_FORMAT or not isinstance(data.get("predictions"), list):
        raise SchemaError("not a fold predictions file of a supported format")
    return [FoldPrediction.from_dict(p) for p in data["predictions"]]


@dataclass
class ExperimentResult:
    predictions: list[FoldPrediction]
    report: dict[str, Any]


def run_experiment(
    table: FeatureTable,
    plan: SplitPlan,
    settings: ExperimentSettings,
    texts: Mapping[str, str] | None = None,
    *,
    with_importance: bool = True,
) -> ExperimentResult:
    logger.info(
        "experiment %s: %d models x %d folds (%s)",
        settings.experiment,
        len(settings.models),
        len(plan.folds),
        plan.protocol,
    )
    predictions = run_folds(table, plan, settings, texts)
    importance: list[dict[str, Any]] = []
    if with_importance and "DT-ALL" in settings.models:
        importance = importance_on_all(table, settings)
    report = build_report(
        predictions,
        experiment=settings.experiment,
        protocol=plan.protocol,
        comparisons=settings.resolved_comparisons(),
        importance=importance,
    )
    return ExperimentResult(predictions=predictions, report=report)


def report_from_predictions(data: dict[str, Any]) -> dict[str, Any]:
    """Rebuild the report from a persisted predictions file."""
    return build_report(
        predictions_from_dict(data),
        experiment=str(data.get("experiment", "experiment")),
        protocol=str(data.get("protocol", "")),
        comparisons=[(str(a), str(b)) for a, b in data.get("comparisons", [])],
        importance=list(data.get("importance", [])),
    )
