"""Command-line entry point: worlds, datasets, features, models and reports (thin wrapper)."""

from __future__ import annotations

import argparse
import sys
from dataclasses import dataclass, replace
from pathlib import Path
from typing import Any, Callable, Sequence

import yaml

from core.artifacts import (
    FeatureTable,
    RunManifest,
    content_hash,
    dumps_json,
    manifest_path_for,
    read_json,
    write_csv_records,
    write_json_report,
    write_jsonl_records,
)
from core.config import LOHO_SUBSETS, MC_REPEATS, PROTOCOLS, RATIO_TAGS, TEMPORAL_TRAIN_WINDOWS, TEMPORAL_WINDOWS
from core.corpus import Corpus, load_corpus_dir, serialize_corpus
from core.errors import ConfigError, SchemaError
from core.features import SCHEMA_IDS, feature_dictionary
from core.logs import configure_logging
from dataset.build import LabeledDataset, build_dataset
from dataset.splits import SplitPlan, make_split
from evalkit.experiment import (
    DEFAULT_MODELS,
    MODEL_SPECS,
    ExperimentSettings,
    FoldPrediction,
    build_report,
    fit_learner,
    importance_records,
    model_spec,
    predictions_to_dict,
    report_from_predictions,
    run_experiment,
)
from evalkit.report import importance_table, render_comparison, render_tables, score_frame, validate_report
from evalkit.trained import TrainedModel, model_view
from learners import list_available_learners
from learners._search import GRID_NAMES
from synthgen import WorldConfig, synthesize
from userfeat.cache import FeatureCache, cache_key
from userfeat.extract import FeaturizerConfig, InstanceFeaturizer, fit_topic_model

# run.yaml section -> subcommand
RUN_CONFIG_SECTIONS = {
    "featurize": "featurize",
    "build": "build-dataset",
    "split": "split",
    "train": "train",
    "eval": "eval",
}
REPORT_FORMATS = ("text", "csv", "json")


@dataclass(frozen=True)
class RunSettings:
    command: str
    seed: int | None
    jobs: int
    verbosity: int
    run_config: str | None

    def __post_init__(self) -> None:
        if self.jobs < 1:
            raise ConfigError(f"--jobs must be at least 1, got {self.jobs}")

    @property
    def effective_seed(self) -> int:
        return 0 if self.seed is None else self.seed


def _format_list(title: str, items: Sequence[str]) -> str:
    if not items:
        return f"{title}:\n  (none)"
    joined = "\n  ".join(items)
    return f"{title}:\n  {joined}"


def _build_parser() -> tuple[argparse.ArgumentParser, dict[str, argparse.ArgumentParser]]:
    epilog = "\n".join(
        [
            _format_list("Models", list(MODEL_SPECS)),
            _format_list("Learners", list_available_learners()),
            _format_list("Split protocols", list(PROTOCOLS)),
        ]
    )
    parser = argparse.ArgumentParser(
        description="Reposting-prediction laboratory",
        formatter_class=argparse.RawTextHelpFormatter,
        epilog=epilog,
    )
    parser.add_argument("--seed", type=int, default=None, help="Seed for sampling, splits and training (default: 0)")
    parser.add_argument("--jobs", type=int, default=1, help="Worker processes; results do not depend on it")
    parser.add_argument("--config", default=None, help="run.yaml with per-command defaults (flags win)")
    parser.add_argument("-v", "--verbose", action="count", default=0, help="More logging (repeatable)")
    parser.add_argument("-q", "--quiet", action="store_true", help="Warnings and errors only")

    sub = parser.add_subparsers(dest="command", required=True)
    commands: dict[str, argparse.ArgumentParser] = {}

    p = sub.add_parser("synth", help="Generate a synthetic world from a YAML config")
    p.add_argument("world_config", help="World config YAML")
    p.add_argument("--out", required=True, help="Output directory for users/posts/exposures JSONL")
    commands["synth"] = p

    p = sub.add_parser("build-dataset", help="Sample a labelled dataset from a corpus")
    p.add_argument("corpus", help="Directory holding posts.jsonl and users.jsonl")
    p.add_argument("--ratio", default="1:5", choices=RATIO_TAGS, help="Positive:negative scheme (default: 1:5)")
    p.add_argument("--out", required=True, help="Dataset JSON path")
    commands["build-dataset"] = p

    p = sub.add_parser("featurize", help="Write the feature CSV of a dataset")
    p.add_argument("corpus", help="Directory holding posts.jsonl and users.jsonl")
    p.add_argument("--dataset", default=None, help="Dataset JSON (default: build one with --ratio)")
    p.add_argument("--ratio", default="1:5", choices=RATIO_TAGS, help="Scheme when no --dataset is given")
    p.add_argument("--schema", default="ALL", choices=SCHEMA_IDS, help="Feature schema (default: ALL)")
    p.add_argument(
        "--strict-causality",
        action=argparse.BooleanOptionalAction,
        default=None,
        help="Cut histories at each event time (default: on when run.yaml splits temporally)",
    )
    p.add_argument("--out", required=True, help="Feature CSV path")
    commands["featurize"] = p

    p = sub.add_parser("split", help="Write a split plan for a dataset")
    p.add_argument("dataset", help="Dataset JSON")
    p.add_argument("--corpus", required=True, help="Corpus directory the dataset was built from")
    p.add_argument("--protocol", default="mixed-mc", choices=PROTOCOLS)
    p.add_argument("--repeats", type=int, default=MC_REPEATS, help="Monte Carlo repetitions")
    p.add_argument("--hashtag", default=None, help="Only this hashtag (loho-ood test hashtag, temporal)")
    p.add_argument("--subsets", type=int, default=LOHO_SUBSETS, help="Folds per held-out hashtag")
    p.add_argument("--windows", type=int, default=TEMPORAL_WINDOWS)
    p.add_argument("--train-windows", type=int, default=TEMPORAL_TRAIN_WINDOWS)
    p.add_argument("--out", required=True, help="Split plan JSON path")
    commands["split"] = p

    p = sub.add_parser("train", help="Fit one model on a feature CSV (one fold, or every row)")
    p.add_argument("features", help="Feature CSV")
    p.add_argument("--model", default="DT-ALL", choices=list(MODEL_SPECS))
    p.add_argument("--split", default=None, help="Split plan JSON; without it every row is used")
    p.add_argument("--fold", type=int, default=0, help="Fold index within --split")
    p.add_argument("--params", nargs="*", default=[], metavar="KEY=VALUE", help="Learner parameter overrides")
    p.add_argument("--grid", default=None, choices=GRID_NAMES, help="Grid-search tree parameters on the fold")
    p.add_argument("--ratio", default="1:5", choices=RATIO_TAGS, help="Scheme for the grid's positive weights")
    p.add_argument("--out", required=True, help="Model JSON path")
    commands["train"] = p

    p = sub.add_parser("eval", help="Train and score models on every fold of a split plan")
    p.add_argument("features", help="Feature CSV")
    p.add_argument("--split", required=True, help="Split plan JSON")
    p.add_argument("--models", default=",".join(DEFAULT_MODELS), help="Comma-separated model names")
    p.add_argument("--model-file", nargs="*", default=[], help="Score these trained models instead of training")
    p.add_argument("--corpus", default=None, help="Corpus directory (bag-of-words models)")
    p.add_argument("--dataset", default=None, help="Dataset JSON (bag-of-words models)")
    p.add_argument("--gbdt", nargs="*", default=[], metavar="KEY=VALUE", help="Tree parameter overrides")
    p.add_argument("--mlp", nargs="*", default=[], metavar="KEY=VALUE", help="Network parameter overrides")
    p.add_argument("--grid", default=None, choices=GRID_NAMES)
    p.add_argument("--ratio", default="1:5", choices=RATIO_TAGS, help="Scheme for the grid's positive weights")
    p.add_argument("--experiment", default=None, help="Experiment name (default: the split protocol)")
    p.add_argument("--no-importance", action="store_true", help="Skip the DT-ALL importance fit")
    p.add_argument("--predictions", default=None, help="Also write the fold predictions here")
    p.add_argument("--out", required=True, help="Report JSON path")
    commands["eval"] = p

    p = sub.add_parser("importance", help="Rank the features of a trained tree model")
    p.add_argument("model_file", help="Model JSON from `train`")
    p.add_argument("--features", default=None, help="Feature CSV to check the model against")
    p.add_argument("--top-k", type=int, default=20)
    p.add_argument("--out", required=True, help="Importance JSON or CSV path")
    commands["importance"] = p

    p = sub.add_parser("report", help="Render a report (or predictions) file as tables")
    p.add_argument("report", help="Report JSON, or a predictions JSON to rebuild the report from")
    p.add_argument("--compare", default=None, help="Out-of-distribution report to set against REPORT")
    p.add_argument("--format", default="text", choices=REPORT_FORMATS)
    p.add_argument("--top-k", type=int, default=20)
    p.add_argument("--out", default=None, help="Write here instead of stdout")
    commands["report"] = p

    return parser, commands


def _load_run_config(path: str) -> dict[str, dict[str, Any]]:
    source = Path(path)
    if not source.is_file():
        raise FileNotFoundError(f"run config not found: {source}")
    try:
        data = yaml.safe_load(source.read_text(encoding="utf-8")) or {}
    except yaml.YAMLError as exc:
        raise ConfigError(f"{source}: invalid YAML ({exc})") from exc
    if not isinstance(data, dict):
        raise ConfigError(f"{source}: expected a mapping of sections")
    unknown = sorted(set(data) - set(RUN_CONFIG_SECTIONS))
    if unknown:
        raise ConfigError(f"{source}: unknown sections {', '.join(map(str, unknown))}")
    for section, values in data.items():
        if not isinstance(values, dict):
            raise ConfigError(f"{source}: section {section!r} must be a mapping")
    return data


def _apply_run_config(commands: dict[str, argparse.ArgumentParser], data: dict[str, dict[str, Any]]) -> None:
    for section, values in data.items():
        sub = commands[RUN_CONFIG_SECTIONS[section]]
        dests = {action.dest for action in sub._actions}
        defaults: dict[str, Any] = {}
        for key, value in values.items():
            dest = str(key).replace("-", "_")
            if dest not in dests or dest == "help":
                raise ConfigError(f"run config: {section} has no option {key!r}")
            defaults[dest] = ",".join(map(str, value)) if isinstance(value, list) else value
        sub.set_defaults(**defaults)
    featurize_keys = {str(k).replace("-", "_") for k in data.get("featurize", {})}
    if data.get("split", {}).get("protocol") == "temporal" and "strict_causality" not in featurize_keys:
        commands["featurize"].set_defaults(strict_causality=True)


def _require_causal_features(features: str, plan: SplitPlan) -> None:
    """Temporal plans only run on features whose histories were cut at the event time."""
    if plan.protocol != "temporal":
        return
    manifest = manifest_path_for(features)
    strict = read_json(manifest).get("config", {}).get("strict_causality") if manifest.is_file() else None
    if strict is not True:
        state = "no featurize manifest" if strict is None else "strict_causality is off"
        raise ConfigError(
            f"{features}: temporal splits need features built with `featurize --strict-causality` ({state})"
        )


def _parse_command_line(argv: Sequence[str] | None) -> argparse.Namespace:
    parser, commands = _build_parser()
    args = parser.parse_args(argv)
    if args.config is None:
        return args
    _apply_run_config(commands, _load_run_config(args.config))
    return parser.parse_args(argv)


def _parse_args(args: argparse.Namespace) -> RunSettings:
    return RunSettings(
        command=args.command,
        seed=args.seed,
        jobs=args.jobs,
        verbosity=-1 if args.quiet else args.verbose,
        run_config=args.config,
    )


def _parse_overrides(items: Sequence[str]) -> dict[str, Any]:
    """KEY=VALUE pairs; values are read as YAML scalars (numbers, booleans)."""
    out: dict[str, Any] = {}
    for item in items:
        key, sep, raw = item.partition("=")
        if not sep or not key:
            raise ConfigError(f"expected KEY=VALUE, got {item!r}")
        try:
            out[key.strip()] = yaml.safe_load(raw)
        except yaml.YAMLError as exc:
            raise ConfigError(f"cannot parse value of {key!r}: {raw!r}") from exc
    return out


def _parse_name_csv(spec: str) -> tuple[str, ...]:
    names = tuple(part.strip() for part in spec.split(",") if part.strip())
    for name in names:
        model_spec(name)
    return names


def _snapshot(args: argparse.Namespace) -> dict[str, Any]:
    return {key: value for key, value in sorted(vars(args).items())}


def _print_results(title: str, rows: dict[str, Any]) -> None:
    print("\n" + "=" * 60)
    print(title)
    print("=" * 60)
    for key, val in rows.items():
        if isinstance(val, float):
            print(f"{key:<18}{val:.4f}")
        else:
            print(f"{key:<18}{val}")
    print("=" * 60)


def _corpus_files(directory: str | Path) -> list[Path]:
    return [Path(directory) / "posts.jsonl", Path(directory) / "users.jsonl"]


def _featurizer(
    corpus: Corpus, corpus_dir: str, *, strict: bool = False
) -> tuple[InstanceFeaturizer, FeatureCache, str]:
    """Featurizer with its topic model and post vectors taken from REPOSTLAB_CACHE when present."""
    config = FeaturizerConfig(strict_causality=strict)
    cache = FeatureCache.from_env()
    key = cache_key(content_hash(_corpus_files(corpus_dir)), config.lda)
    topic_model = cache.load_topic_model(key)
    if topic_model is None:
        topic_model = fit_topic_model(corpus, config.lda)
        cache.save_topic_model(key, topic_model)
    featurizer = InstanceFeaturizer(corpus, topic_model, config=config)
    featurizer.preload(cache.load_post_features(key))
    return featurizer, cache, key


def _load_dataset(path: str, corpus: Corpus) -> LabeledDataset:
    return LabeledDataset.from_dict(read_json(path), corpus)


# -- commands ---------------------------------------------------------------


def _cmd_synth(args: argparse.Namespace, settings: RunSettings) -> int:
    config = WorldConfig.from_yaml(args.world_config)
    if settings.seed is not None:
        config = replace(config, seed=settings.seed)
    world, cascades, corpus = synthesize(config)
    out = Path(args.out)
    posts_path, users_path = out / "posts.jsonl", out / "users.jsonl"
    serialize_corpus(corpus, posts_path, users_path)
    exposures_path = write_jsonl_records(out / "exposures.jsonl", (e.to_dict() for e in cascades.exposures))

    manifest = RunManifest(
        command="synth",
        config={"world": config.to_dict(), **_snapshot(args)},
        seeds={"world": config.seed},
    )
    manifest.add_input("world_config", args.world_config)
    for path in (users_path, posts_path, exposures_path):
        manifest.add_artifact(path)
    manifest.write(manifest_path_for(out))

    _print_results(
        "SYNTHETIC WORLD",
        {
            "Users": len(world.ids),
            "Follow edges": world.graph.number_of_edges(),
            "Originals": len(world.originals),
            "Exposures": len(cascades.exposures),
            "Reposts": len(cascades.reposts),
            "Repost rate": cascades.repost_rate,
            "Output": str(out),
        },
    )
    return 0


def _cmd_build(args: argparse.Namespace, settings: RunSettings) -> int:
    corpus = load_corpus_dir(args.corpus)
    featurizer, cache, key = _featurizer(corpus, args.corpus)
    if settings.jobs > 1:
        featurizer.precompute(((p, None) for p in corpus.known_posts.values()), settings.jobs)
    dataset = build_dataset(corpus, args.ratio, settings.effective_seed, featurizer=featurizer)
    cache.save_post_features(key, featurizer.cached_post_features())
    out = write_json_report(args.out, dataset.to_dict())

    manifest = RunManifest(
        command="build-dataset", config=_snapshot(args), seeds={"dataset": settings.effective_seed}
    )
    for path in _corpus_files(args.corpus):
        manifest.add_input(path.name, path)
    manifest.add_artifact(out)
    manifest.write(manifest_path_for(out))

    counts = dataset.label_counts()
    _print_results(
        f"DATASET {args.ratio}",
        {
            "Positives": counts[1],
            "Negatives": counts[0],
            "Hashtags": len(dataset.hashtags()),
            "Empty pools": dataset.report.empty_pool,
            "Deficits": dataset.report.deficit,
            "Output": str(out),
        },
    )
    return 0


def _cmd_featurize(args: argparse.Namespace, settings: RunSettings) -> int:
    corpus = load_corpus_dir(args.corpus)
    strict = bool(args.strict_causality)
    featurizer, cache, key = _featurizer(corpus, args.corpus, strict=strict)
    if args.dataset:
        dataset = _load_dataset(args.dataset, corpus)
    else:
        dataset = build_dataset(corpus, args.ratio, settings.effective_seed, featurizer=featurizer)
    featurizer.precompute(featurizer.history_requests(dataset.instances), settings.jobs)
    table = FeatureTable(
        names=feature_dictionary(args.schema),
        X=featurizer.transform(dataset.instances, args.schema),
        labels=dataset.labels,
        hashtags=[inst.hashtag for inst in dataset.instances],
        ids=[inst.instance_id for inst in dataset.instances],
    )
    cache.save_post_features(key, featurizer.cached_post_features())
    out = table.to_csv(args.out)

    manifest = RunManifest(
        command="featurize",
        config={**_snapshot(args), "strict_causality": strict},
        seeds={"dataset": dataset.seed},
    )
    for path in _corpus_files(args.corpus):
        manifest.add_input(path.name, path)
    if args.dataset:
        manifest.add_input("dataset", args.dataset)
    manifest.add_artifact(out)
    manifest.write(manifest_path_for(out))

    _print_results(
        f"FEATURES {args.schema}",
        {
            "Instances": len(table),
            "Columns": len(table.names),
            "Dictionary": table.dictionary_hash[:16],
            "Strict causality": "on" if strict else "off",
            "Zero TORs": featurizer.stats.zero_tors,
            "Output": str(out),
        },
    )
    return 0


def _cmd_split(args: argparse.Namespace, settings: RunSettings) -> int:
    corpus = load_corpus_dir(args.corpus)
    dataset = _load_dataset(args.dataset, corpus)
    if args.protocol in ("mixed-mc", "perhash-mc"):
        kwargs: dict[str, Any] = {"repeats": args.repeats}
    elif args.protocol == "loho-ood":
        kwargs = {"target_hashtag": args.hashtag, "subsets": args.subsets}
    else:
        kwargs = {"hashtag": args.hashtag, "windows": args.windows, "train_windows": args.train_windows}
    plan = make_split(dataset, args.protocol, settings.effective_seed, **kwargs)
    out = write_json_report(args.out, plan.to_dict())

    manifest = RunManifest(command="split", config=_snapshot(args), seeds={"split": settings.effective_seed})
    manifest.add_input("dataset", args.dataset)
    manifest.add_artifact(out)
    manifest.write(manifest_path_for(out))

    _print_results(
        f"SPLIT {plan.protocol}",
        {
            "Folds": len(plan.folds),
            "Groups": len(plan.groups()),
            "Leakage removed": sum(f.removed for f in plan.folds),
            "Cross-hashtag": plan.removed_cross_hashtag,
            "Output": str(out),
        },
    )
    return 0


def _cmd_train(args: argparse.Namespace, settings: RunSettings) -> int:
    spec = model_spec(args.model)
    view = model_view(FeatureTable.from_csv(args.features), spec)
    overrides = _parse_overrides(args.params)
    experiment = ExperimentSettings(
        models=(spec.name,),
        gbdt=overrides if spec.learner == "gbdt" else {},
        mlp=overrides if spec.learner == "mlp" else {},
        grid=args.grid,
        ratio_tag=args.ratio,
        seed=settings.effective_seed,
    )
    if args.split:
        plan = SplitPlan.from_dict(read_json(args.split))
        _require_causal_features(args.features, plan)
        if not 0 <= args.fold < len(plan.folds):
            raise ConfigError(f"--fold {args.fold} is out of range for {len(plan.folds)} folds")
        fold = plan.folds[args.fold]
        train_ids, val_ids = fold.train, fold.val
    else:
        train_ids, val_ids = tuple(view.ids), ()
    val = view.subset(val_ids) if val_ids else None
    learner, chosen = fit_learner(spec, view.names, view.subset(train_ids), val, experiment)
    trained = TrainedModel(model=spec.name, learner=learner, params=chosen)
    out = trained.save(args.out)

    manifest = RunManifest(command="train", config=_snapshot(args), seeds={"train": settings.effective_seed})
    manifest.add_input("features", args.features)
    if args.split:
        manifest.add_input("split", args.split)
    manifest.add_artifact(out)
    manifest.write(manifest_path_for(out))

    rows: dict[str, Any] = {
        "Model": spec.name,
        "Train rows": len(train_ids),
        "Validation rows": len(val_ids),
        "Dictionary": trained.dictionary_hash[:16],
    }
    if chosen:
        rows["Grid point"] = ", ".join(f"{k}={v}" for k, v in chosen.items())
    rows["Output"] = str(out)
    _print_results("TRAINED MODEL", rows)
    return 0


def _score_model_files(paths: Sequence[str], table: FeatureTable, plan: SplitPlan) -> list[FoldPrediction]:
    predictions: list[FoldPrediction] = []
    for path in paths:
        trained = TrainedModel.load(path)
        for i, fold in enumerate(plan.folds):
            X, y = trained.matrix(table, fold.test)
            scores = trained.learner.predict_proba(X)
            predictions.append(
                FoldPrediction(
                    model=trained.model,
                    fold=i,
                    group=fold.group,
                    ids=tuple(fold.test),
                    labels=tuple(int(v) for v in y),
                    scores=tuple(float(s) for s in scores),
                    params=trained.params,
                )
            )
    return predictions


def _cmd_eval(args: argparse.Namespace, settings: RunSettings) -> int:
    table = FeatureTable.from_csv(args.features)
    plan = SplitPlan.from_dict(read_json(args.split))
    _require_causal_features(args.features, plan)
    experiment_name = args.experiment or plan.protocol
    experiment = ExperimentSettings(
        experiment=experiment_name,
        models=_parse_name_csv(args.models),
        gbdt=_parse_overrides(args.gbdt),
        mlp=_parse_overrides(args.mlp),
        grid=args.grid,
        ratio_tag=args.ratio,
        seed=settings.effective_seed,
        jobs=settings.jobs,
    )

    if args.model_file:
        predictions = _score_model_files(args.model_file, table, plan)
        models = tuple(dict.fromkeys(p.model for p in predictions))
        comparisons = replace(experiment, models=models).resolved_comparisons()
        report = build_report(predictions, experiment=experiment_name, protocol=plan.protocol, comparisons=comparisons)
        importance: list[dict[str, Any]] = []
    else:
        texts = None
        if any(model_spec(m).bow for m in experiment.models):
            if not (args.corpus and args.dataset):
                raise ConfigError("bag-of-words models need --corpus and --dataset for the post texts")
            dataset = _load_dataset(args.dataset, load_corpus_dir(args.corpus))
            texts = {inst.instance_id: inst.post.text for inst in dataset.instances}
        result = run_experiment(table, plan, experiment, texts, with_importance=not args.no_importance)
        predictions, report = result.predictions, result.report
        comparisons = experiment.resolved_comparisons()
        importance = report["importance"]

    out = write_json_report(args.out, report)
    manifest = RunManifest(command="eval", config=_snapshot(args), seeds={"train": settings.effective_seed})
    manifest.add_input("features", args.features)
    manifest.add_input("split", args.split)
    for path in args.model_file:
        manifest.add_input(Path(path).name, path)
    manifest.add_artifact(out)
    if args.predictions:
        manifest.add_artifact(
            write_json_report(
                args.predictions,
                predictions_to_dict(predictions, experiment_name, plan.protocol, comparisons, importance),
            )
        )
    manifest.write(manifest_path_for(out))

    print(render_tables(report), end="")
    return 0


def _cmd_importance(args: argparse.Namespace, settings: RunSettings) -> int:
    trained = TrainedModel.load(args.model_file)
    if args.features:
        trained.matrix(FeatureTable.from_csv(args.features))
    weights = trained.learner.feature_importance()
    if not weights:
        raise ConfigError(f"model {trained.model} ({trained.learner.name}) reports no feature importance")
    records = importance_records(weights)
    out = Path(args.out)
    if out.suffix == ".csv":
        write_csv_records(out, records, columns=["feature", "weight", "type", "subtype"])
    else:
        write_json_report(out, {"model": trained.model, "importance": records})

    manifest = RunManifest(command="importance", config=_snapshot(args), seeds={})
    manifest.add_input("model", args.model_file)
    if args.features:
        manifest.add_input("features", args.features)
    manifest.add_artifact(out)
    manifest.write(manifest_path_for(out))

    print("=" * 60)
    print(f"Top {args.top_k} features of {trained.model} by gain")
    print("=" * 60)
    print(importance_table(records, args.top_k).to_string(index=False, float_format="{:.4f}".format))
    return 0


def _load_report(path: str) -> dict[str, Any]:
    data = read_json(path)
    if isinstance(data, dict) and "predictions" in data:
        return report_from_predictions(data)
    return validate_report(data)


def _cmd_report(args: argparse.Namespace, settings: RunSettings) -> int:
    report = _load_report(args.report)
    if args.compare:
        text = render_comparison(report, _load_report(args.compare))
    elif args.format == "csv":
        text = score_frame(report).to_csv(lineterminator="\n")
    elif args.format == "json":
        text = dumps_json(report)
    else:
        text = render_tables(report, args.top_k)
    if args.out:
        out = Path(args.out)
        out.parent.mkdir(parents=True, exist_ok=True)
        out.write_text(text, encoding="utf-8")
        manifest = RunManifest(command="report", config=_snapshot(args), seeds={})
        manifest.add_input("report", args.report)
        if args.compare:
            manifest.add_input("compare", args.compare)
        manifest.add_artifact(out)
        manifest.write(manifest_path_for(out))
    else:
        print(text, end="")
    return 0


COMMANDS: dict[str, Callable[[argparse.Namespace, RunSettings], int]] = {
    "synth": _cmd_synth,
    "build-dataset": _cmd_build,
    "featurize": _cmd_featurize,
    "split": _cmd_split,
    "train": _cmd_train,
    "eval": _cmd_eval,
    "importance": _cmd_importance,
    "report": _cmd_report,
}


def main(argv: Sequence[str] | None = None) -> None:
    try:
        args = _parse_command_line(argv)
        settings = _parse_args(args)
    except (ConfigError, FileNotFoundError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        raise SystemExit(2) from None
    configure_logging(settings.verbosity)

    try:
        exit_code = COMMANDS[settings.command](args, settings)
    except (ConfigError, SchemaError, FileNotFoundError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        exit_code = 2
    except Exception as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        exit_code = 1
    raise SystemExit(exit_code)


if __name__ == "__main__":
    main()
