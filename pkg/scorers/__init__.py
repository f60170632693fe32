"""Text scorers package with dynamic loader utilities.

- list_available_scorers(): discover scorer module names in this package
- load_scorer_class(name): import module and find a subclass of TextScorer
- create_scorer(name): instantiate the discovered scorer class
- ScorerRegistry: named scorers consumed by post feature extraction
"""

from __future__ import annotations

import importlib
import inspect
import os
import pkgutil
from types import ModuleType
from typing import Iterator

from core.scorer import TextScorer

REQUIRED_SCORERS = (
    "topic_m",
    "topic_g",
    "emotion",
    "irony",
    "offensive",
    "masculinity",
    "emoji",
    "hate",
    "grammar",
    "polarity",
    "subjectivity",
)


def _package_path() -> str:
    return os.path.dirname(__file__)


def list_available_scorers() -> list[str]:
    """Return available scorer module names (filenames without extension)."""
    modules = [m.name for m in pkgutil.iter_modules([_package_path()]) if not m.name.startswith("_")]
    modules.sort()
    return modules


def _find_scorer_class_in_module(module: ModuleType) -> type[TextScorer] | None:
    candidates = [
        cls
        for _, cls in inspect.getmembers(module, inspect.isclass)
        if issubclass(cls, TextScorer)
        and cls is not TextScorer
        and cls.__module__ == module.__name__
        and not inspect.isabstract(cls)
    ]
    if not candidates:
        return None
    candidates.sort(key=lambda c: c.__name__)
    return candidates[0]


def load_scorer_class(name: str) -> type[TextScorer]:
    """Import `scorers.<name>` and return its TextScorer subclass."""
    module_name = name.strip().lower().replace("-", "_")
    if not module_name or module_name.startswith((".", "_")):
        raise ValueError(f"Invalid scorer name: {name!r}")
    module = importlib.import_module(f"scorers.{module_name}")
    scorer_cls = _find_scorer_class_in_module(module)
    if scorer_cls is None:
        raise ValueError(f"No TextScorer subclass found in module 'scorers.{module_name}'")
    return scorer_cls


def create_scorer(name: str) -> TextScorer:
    return load_scorer_class(name)()


class ScorerRegistry:
    """Named text scorers; replace an entry to plug in a different model."""

    def __init__(self, scorers: dict[str, TextScorer] | None = None) -> None:
        self._scorers: dict[str, TextScorer] = dict(scorers or {})

    @classmethod
    def default(cls) -> "ScorerRegistry":
        return cls({name: create_scorer(name) for name in REQUIRED_SCORERS})

    def register(self, name: str, scorer: TextScorer) -> None:
        self._scorers[name] = scorer

    def get(self, name: str) -> TextScorer:
        try:
            return self._scorers[name]
        except KeyError:
            raise KeyError(f"No scorer registered under {name!r}") from None

    def missing(self) -> list[str]:
        return [name for name in REQUIRED_SCORERS if name not in self._scorers]

    def __contains__(self, name: object) -> bool:
        return name in self._scorers

    def __iter__(self) -> Iterator[str]:
        return iter(sorted(self._scorers))


__all__ = [
    "REQUIRED_SCORERS",
    "ScorerRegistry",
    "list_available_scorers",
    "load_scorer_class",
    "create_scorer",
]
