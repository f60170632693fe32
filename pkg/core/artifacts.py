"""Artifact writers, content hashes and run manifests."""

from __future__ import annotations

import hashlib
import json
import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Iterable

import numpy as np
import pandas as pd

from core.config import TOOL_VERSION
from core.errors import SchemaError
from core.features import dictionary_hash, feature_dictionary


def json_safe(value: Any) -> Any:
    """Replace non-finite floats by None so output is strict JSON."""
    if isinstance(value, float):
        return value if math.isfinite(value) else None
    if isinstance(value, dict):
        return {str(k): json_safe(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [json_safe(v) for v in value]
    return value


def dumps_json(payload: Any) -> str:
    return json.dumps(json_safe(payload), indent=2, sort_keys=True, allow_nan=False) + "\n"


def write_json_report(path: str | Path, payload: Any) -> Path:
    out = Path(path)
    out.parent.mkdir(parents=True, exist_ok=True)
    out.write_text(dumps_json(payload), encoding="utf-8")
    return out


def read_json(path: str | Path) -> Any:
    path = Path(path)
    if not path.is_file():
        raise FileNotFoundError(f"file not found: {path}")
    return json.loads(path.read_text(encoding="utf-8"))


def write_csv_records(path: str | Path, records: list[dict[str, Any]], columns: list[str] | None = None) -> Path:
    out = Path(path)
    out.parent.mkdir(parents=True, exist_ok=True)
    if columns is None:
        names: set[str] = set()
        for record in records:
            names.update(record.keys())
        columns = sorted(names)
    frame = pd.DataFrame.from_records(records, columns=columns)
    frame.to_csv(out, index=False, na_rep="NaN", lineterminator="\n")
    return out


def write_jsonl_records(path: str | Path, records: Iterable[dict[str, Any]]) -> Path:
    """One compact, key-sorted JSON object per line."""
    out = Path(path)
    out.parent.mkdir(parents=True, exist_ok=True)
    with out.open("w", encoding="utf-8", newline="\n") as fh:
        for record in records:
            fh.write(json.dumps(json_safe(record), sort_keys=True, separators=(",", ":"), allow_nan=False))
            fh.write("\n")
    return out


def file_sha256(path: str | Path) -> str:
    digest = hashlib.sha256()
    with Path(path).open("rb") as fh:
        for chunk in iter(lambda: fh.read(1 << 20), b""):
            digest.update(chunk)
    return digest.hexdigest()


def content_hash(paths: list[str | Path]) -> str:
    """Hash of several files' contents, order-sensitive."""
    digest = hashlib.sha256()
    for path in paths:
        digest.update(file_sha256(path).encode("ascii"))
    return digest.hexdigest()


@dataclass
class RunManifest:
    """Everything needed to re-execute a command bit-identically.

    No wall-clock timestamps are recorded, so reruns with identical inputs
    produce identical manifests.
    """

    command: str
    config: dict[str, Any]
    seeds: dict[str, int | None] = field(default_factory=dict)
    inputs: dict[str, str] = field(default_factory=dict)
    artifacts: dict[str, str] = field(default_factory=dict)
    tool_version: str = TOOL_VERSION

    def add_input(self, label: str, path: str | Path) -> None:
        self.inputs[label] = file_sha256(path)

    def add_artifact(self, path: str | Path) -> None:
        self.artifacts[Path(path).name] = file_sha256(path)

    def to_dict(self) -> dict[str, Any]:
        return {
            "command": self.command,
            "config": self.config,
            "seeds": self.seeds,
            "inputs": self.inputs,
            "artifacts": self.artifacts,
            "tool_version": self.tool_version,
        }

    def write(self, path: str | Path) -> Path:
        return write_json_report(path, self.to_dict())


def manifest_path_for(out: str | Path) -> Path:
    """manifest.json inside an output directory, or <file>.manifest.json next to a file."""
    out = Path(out)
    if out.suffix == "":
        return out / "manifest.json"
    return out.with_name(out.name + ".manifest.json")


BOOKKEEPING_COLUMNS = ("label", "hashtag", "instance_id")


@dataclass
class FeatureTable:
    """A featurized dataset: named columns plus label, hashtag and instance id per row."""

    names: list[str]
    X: np.ndarray
    labels: np.ndarray
    hashtags: list[str]
    ids: list[str]

    def __post_init__(self) -> None:
        self.X = np.asarray(self.X, dtype=np.float64).reshape(len(self.ids), len(self.names))
        self.labels = np.asarray(self.labels, dtype=np.int64)
        if not (self.labels.shape[0] == len(self.hashtags) == len(self.ids)):
            raise SchemaError("feature table columns have different lengths")
        if len(set(self.ids)) != len(self.ids):
            raise SchemaError("feature table has duplicate instance ids")
        self._row = {instance_id: i for i, instance_id in enumerate(self.ids)}

    def __len__(self) -> int:
        return len(self.ids)

    @property
    def dictionary_hash(self) -> str:
        return dictionary_hash(self.names)

    def rows(self, ids: Iterable[str]) -> np.ndarray:
        try:
            return np.asarray([self._row[i] for i in ids], dtype=np.int64)
        except KeyError as exc:
            raise SchemaError(f"instance {exc.args[0]!r} is not in the feature table") from None

    def subset(self, ids: Iterable[str]) -> tuple[np.ndarray, np.ndarray]:
        idx = self.rows(ids)
        return self.X[idx], self.labels[idx]

    def select(self, schema_id: str) -> "FeatureTable":
        """Restrict to one schema's columns; the table must contain all of them."""
        wanted = feature_dictionary(schema_id)
        if wanted == self.names:
            return self
        position = {name: i for i, name in enumerate(self.names)}
        missing = [n for n in wanted if n not in position]
        if missing:
            raise SchemaError(
                f"feature table lacks {len(missing)} columns of schema {schema_id} (first: {missing[0]})"
            )
        cols = [position[n] for n in wanted]
        return FeatureTable(wanted, self.X[:, cols], self.labels, self.hashtags, self.ids)

    def to_frame(self) -> pd.DataFrame:
        frame = pd.DataFrame(self.X, columns=self.names)
        frame["label"] = self.labels
        frame["hashtag"] = self.hashtags
        frame["instance_id"] = self.ids
        return frame

    def to_csv(self, path: str | Path) -> Path:
        out = Path(path)
        out.parent.mkdir(parents=True, exist_ok=True)
        self.to_frame().to_csv(out, index=False, na_rep="NaN", lineterminator="\n")
        return out

    @classmethod
    def from_csv(cls, path: str | Path) -> "FeatureTable":
        path = Path(path)
        if not path.is_file():
            raise FileNotFoundError(f"file not found: {path}")
        frame = pd.read_csv(
            path,
            na_values=["NaN"],
            keep_default_na=False,
            float_precision="round_trip",
            dtype={"hashtag": str, "instance_id": str},
        )
        columns = list(frame.columns)
        if columns[-3:] != list(BOOKKEEPING_COLUMNS):
            raise SchemaError(f"{path}: last columns must be {', '.join(BOOKKEEPING_COLUMNS)}")
        names = columns[:-3]
        return cls(
            names=names,
            X=frame[names].to_numpy(dtype=np.float64),
            labels=frame["label"].to_numpy(dtype=np.int64),
            hashtags=frame["hashtag"].tolist(),
            ids=frame["instance_id"].tolist(),
        )
