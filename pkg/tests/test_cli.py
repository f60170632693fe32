from __future__ import annotations

import json
from pathlib import Path

import pandas as pd
import pytest

from core.artifacts import BOOKKEEPING_COLUMNS
from core.features import schema_size
from dataset.splits import Fold, SplitPlan
from main import main

WORLD_YAML = """\
world:
  n_users: 30
  n_hashtags: 2
  posts_per_hashtag: 6
  history_length: 6
  base_rate: -1.0
  seed: 2
"""


def _run(argv: list[str]) -> int:
    with pytest.raises(SystemExit) as exc:
        main(argv)
    return exc.value.code


def _report() -> dict:
    return {
        "experiment": "demo",
        "protocol": "mixed-mc",
        "models": [
            {
                "name": "DT-ALL",
                "per_group": [{"group": "mixed", "mu": 0.5, "sigma": 0.1, "folds": [0.4, 0.6]}],
                "overall": {"mu": 0.5, "sigma": 0.1},
            }
        ],
    }


@pytest.fixture
def world_dir(tmp_path, monkeypatch) -> Path:
    monkeypatch.delenv("REPOSTLAB_CACHE", raising=False)
    config = tmp_path / "world.yaml"
    config.write_text(WORLD_YAML, encoding="utf-8")
    out = tmp_path / "world"
    assert _run(["synth", str(config), "--out", str(out)]) == 0
    return out


def test_missing_run_config_exits_with_usage_error(tmp_path, capsys) -> None:
    code = _run(["--config", str(tmp_path / "nope.yaml"), "report", str(tmp_path / "r.json")])
    assert code == 2
    assert "run config not found" in capsys.readouterr().err


def test_unknown_run_config_section(tmp_path) -> None:
    config = tmp_path / "run.yaml"
    config.write_text("plots:\n  dpi: 100\n", encoding="utf-8")
    assert _run(["--config", str(config), "report", str(tmp_path / "r.json")]) == 2
    config.write_text("eval:\n  colour: red\n", encoding="utf-8")
    assert _run(["--config", str(config), "report", str(tmp_path / "r.json")]) == 2


def test_report_rejects_invalid_files(tmp_path) -> None:
    empty = tmp_path / "empty.json"
    empty.write_text("{}", encoding="utf-8")
    assert _run(["report", str(empty)]) == 2
    assert _run(["report", str(tmp_path / "missing.json")]) == 2


def test_report_renders_tables_and_csv(tmp_path, capsys) -> None:
    path = tmp_path / "report.json"
    path.write_text(json.dumps(_report()), encoding="utf-8")
    assert _run(["report", str(path)]) == 0
    assert "0.500 ± 0.100" in capsys.readouterr().out
    out = tmp_path / "tables" / "report.csv"
    assert _run(["report", str(path), "--format", "csv", "--out", str(out)]) == 0
    frame = pd.read_csv(out, index_col=0)
    assert list(frame.index) == ["mixed", "overall"]
    assert (tmp_path / "tables" / "report.csv.manifest.json").is_file()


def test_synth_rerun_is_byte_identical(world_dir: Path, tmp_path) -> None:
    first = {name: (world_dir / name).read_bytes() for name in ("posts.jsonl", "users.jsonl", "manifest.json")}
    config = tmp_path / "world.yaml"
    assert _run(["synth", str(config), "--out", str(world_dir)]) == 0
    for name, data in first.items():
        assert (world_dir / name).read_bytes() == data, name
    manifest = json.loads(first["manifest.json"])
    assert manifest["command"] == "synth"
    assert set(manifest["artifacts"]) == {"posts.jsonl", "users.jsonl", "exposures.jsonl"}
    assert (world_dir / "exposures.jsonl").stat().st_size > 0


def test_seed_flag_overrides_world_seed(world_dir: Path, tmp_path) -> None:
    other = tmp_path / "other"
    assert _run(["--seed", "5", "synth", str(tmp_path / "world.yaml"), "--out", str(other)]) == 0
    manifest = json.loads((other / "manifest.json").read_text(encoding="utf-8"))
    assert manifest["seeds"] == {"world": 5}
    assert (other / "posts.jsonl").read_bytes() != (world_dir / "posts.jsonl").read_bytes()


def test_dataset_and_feature_columns_per_schema(world_dir: Path, tmp_path) -> None:
    dataset = tmp_path / "dataset.json"
    assert _run(["--seed", "1", "build-dataset", str(world_dir), "--ratio", "1:1", "--out", str(dataset)]) == 0
    assert json.loads(dataset.read_text(encoding="utf-8"))["ratio_tag"] == "1:1"
    for schema in ("M", "U-P", "U"):
        out = tmp_path / f"features_{schema}.csv"
        argv = ["featurize", str(world_dir), "--dataset", str(dataset), "--schema", schema, "--out", str(out)]
        assert _run(argv) == 0
        columns = list(pd.read_csv(out, nrows=0).columns)
        assert len(columns) == schema_size(schema) + len(BOOKKEEPING_COLUMNS)
        assert columns[-len(BOOKKEEPING_COLUMNS) :] == list(BOOKKEEPING_COLUMNS)


def test_unknown_corpus_directory(tmp_path) -> None:
    assert _run(["build-dataset", str(tmp_path / "none"), "--out", str(tmp_path / "d.json")]) == 2


def _featurize(world_dir: Path, dataset: Path, out: Path, *flags: str, config: Path | None = None) -> int:
    head = ["--config", str(config)] if config else []
    argv = [*head, "featurize", str(world_dir), "--dataset", str(dataset), "--schema", "U-P", *flags]
    return _run([*argv, "--out", str(out)])


def _temporal_plan(features: Path, out: Path) -> Path:
    ids = list(pd.read_csv(features, usecols=["instance_id"], dtype=str)["instance_id"])
    half = len(ids) // 2
    folds = [
        Fold(train=tuple(ids[:half]), val=(), test=tuple(ids[half:]), group="topic00"),
        Fold(train=tuple(ids[half:]), val=(), test=tuple(ids[:half]), group="topic00"),
    ]
    out.write_text(json.dumps(SplitPlan("temporal", 0, folds).to_dict()), encoding="utf-8")
    return out


def test_temporal_plans_need_causal_features(world_dir: Path, tmp_path, capsys) -> None:
    dataset = tmp_path / "dataset.json"
    assert _run(["build-dataset", str(world_dir), "--ratio", "1:1", "--out", str(dataset)]) == 0
    loose = tmp_path / "loose.csv"
    strict = tmp_path / "strict.csv"
    assert _featurize(world_dir, dataset, loose) == 0
    assert _featurize(world_dir, dataset, strict, "--strict-causality") == 0
    assert json.loads((tmp_path / "loose.csv.manifest.json").read_text())["config"]["strict_causality"] is False
    plan = _temporal_plan(strict, tmp_path / "temporal.json")
    eval_args = ["--split", str(plan), "--models", "RANDOM", "--no-importance"]

    capsys.readouterr()
    assert _run(["eval", str(loose), *eval_args, "--out", str(tmp_path / "a.json")]) == 2
    assert "--strict-causality" in capsys.readouterr().err
    train_args = ["--model", "DT-U-P", "--split", str(plan), "--params", "n_estimators=2"]
    assert _run(["train", str(loose), *train_args, "--out", str(tmp_path / "m.json")]) == 2
    assert _run(["train", str(strict), *train_args, "--out", str(tmp_path / "m.json")]) == 0
    assert _run(["eval", str(strict), *eval_args, "--out", str(tmp_path / "b.json")]) == 0
    assert json.loads((tmp_path / "b.json").read_text())["protocol"] == "temporal"


def test_temporal_run_config_defaults_to_strict_features(world_dir: Path, tmp_path) -> None:
    dataset = tmp_path / "dataset.json"
    assert _run(["build-dataset", str(world_dir), "--ratio", "1:1", "--out", str(dataset)]) == 0
    config = tmp_path / "run.yaml"
    config.write_text("split:\n  protocol: temporal\n", encoding="utf-8")

    def strict_of(name: str) -> bool:
        return json.loads((tmp_path / f"{name}.manifest.json").read_text())["config"]["strict_causality"]

    assert _featurize(world_dir, dataset, tmp_path / "on.csv", config=config) == 0
    assert strict_of("on.csv") is True
    assert _featurize(world_dir, dataset, tmp_path / "off.csv", "--no-strict-causality", config=config) == 0
    assert strict_of("off.csv") is False
