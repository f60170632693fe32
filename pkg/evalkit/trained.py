"""Model files: a fitted learner plus the model name and schema it was trained on."""

from __future__ import annotations

from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Iterable

import numpy as np

from core.artifacts import FeatureTable, read_json, write_json_report
from core.errors import SchemaError
from core.features import dictionary_hash
from core.learner import Learner
from evalkit.experiment import ModelSpec, model_spec
from learners import learner_from_dict

MODEL_FILE_FORMAT = 1


def model_view(table: FeatureTable, spec: ModelSpec) -> FeatureTable:
    """The table columns a model reads; models without a schema read no columns."""
    if spec.bow:
        raise SchemaError(f"model {spec.name} reads post texts and cannot be fitted from a feature file alone")
    if spec.schema is None:
        return FeatureTable([], np.zeros((len(table), 0)), table.labels, table.hashtags, table.ids)
    return table.select(spec.schema)


@dataclass
class TrainedModel:
    model: str
    learner: Learner
    params: dict[str, Any] = field(default_factory=dict)

    @property
    def spec(self) -> ModelSpec:
        return model_spec(self.model)

    @property
    def dictionary_hash(self) -> str:
        return dictionary_hash(self.learner.feature_names)

    def matrix(self, table: FeatureTable, ids: Iterable[str] | None = None) -> tuple[np.ndarray, np.ndarray]:
        """Rows of `table` in this model's column order; a different feature dictionary is an error."""
        view = model_view(table, self.spec)
        if view.dictionary_hash != self.dictionary_hash:
            raise SchemaError(
                f"feature dictionary mismatch: model {self.model} expects {self.dictionary_hash[:12]}, "
                f"feature file gives {view.dictionary_hash[:12]}"
            )
        if ids is None:
            return view.X, view.labels
        return view.subset(ids)

    def to_dict(self) -> dict[str, Any]:
        return {
            "format": MODEL_FILE_FORMAT,
            "model": self.model,
            "schema": self.spec.schema,
            "dictionary_hash": self.dictionary_hash,
            "params": dict(self.params),
            "learner": self.learner.to_dict(),
        }

    @classmethod
    def from_dict(cls, data: Any) -> "TrainedModel":
        if not isinstance(data, dict) or data.get("format") != MODEL_FILE_FORMAT:
            raise SchemaError("not a model file of a supported format")
        name = str(data.get("model"))
        model_spec(name)
        trained = cls(
            model=name,
            learner=learner_from_dict(data.get("learner") or {}),
            params=dict(data.get("params", {})),
        )
        if trained.dictionary_hash != data.get("dictionary_hash"):
            raise SchemaError(f"model file for {trained.model} has a corrupt feature dictionary hash")
        return trained

    def save(self, path: str | Path) -> Path:
        return write_json_report(path, self.to_dict())

    @classmethod
    def load(cls, path: str | Path) -> "TrainedModel":
        return cls.from_dict(read_json(path))
