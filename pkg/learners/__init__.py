"""Learners package with dynamic loader utilities.

- list_available_learners(): discover learner module names in this package
- load_learner_class(name): import module and find a subclass of core.learner.Learner
- create_learner(name): instantiate the discovered learner class
- learner_from_dict(data): rebuild a trained learner from its model file
"""

from __future__ import annotations

import importlib
import inspect
import os
import pkgutil
from types import ModuleType
from typing import Any

from core.errors import SchemaError
from core.learner import Learner


def _package_path() -> str:
    return os.path.dirname(__file__)


def list_available_learners() -> list[str]:
    """Return available learner module names (filenames without extension)."""
    modules: list[str] = []
    for mod in pkgutil.iter_modules([_package_path()]):
        if mod.name.startswith("_"):
            continue
        modules.append(mod.name)
    modules.sort()
    return modules


def _find_learner_class_in_module(module: ModuleType) -> type[Learner] | None:
    factory = getattr(module, "create_learner", None)
    if callable(factory):
        instance = factory()
        if isinstance(instance, Learner):
            return type(instance)

    candidates = [
        cls
        for _, cls in inspect.getmembers(module, inspect.isclass)
        if issubclass(cls, Learner) and cls is not Learner and cls.__module__ == module.__name__
    ]
    if not candidates:
        return None
    candidates.sort(key=lambda c: c.__name__)
    return candidates[0]


def _import(name: str) -> ModuleType:
    module_name = name.strip().lower().replace("-", "_")
    if not module_name or module_name.startswith((".", "_")):
        raise ValueError(f"Invalid learner name: {name!r}")
    return importlib.import_module(f"learners.{module_name}")


def load_learner_class(name: str) -> type[Learner]:
    """Import `learners.<name>` and return its Learner subclass.

    Raises ImportError/ValueError on failure.
    """
    module = _import(name)
    learner_cls = _find_learner_class_in_module(module)
    if learner_cls is None:
        raise ValueError(f"No Learner subclass found in module {module.__name__!r}")
    return learner_cls


def create_learner(name: str, **kwargs: Any) -> Learner:
    return load_learner_class(name)(**kwargs)


def learner_from_dict(data: dict[str, Any]) -> Learner:
    kind = data.get("kind")
    if not isinstance(kind, str) or kind not in list_available_learners():
        raise SchemaError(f"model file has unknown learner kind {kind!r}")
    return load_learner_class(kind).from_dict(data)


__all__ = [
    "list_available_learners",
    "load_learner_class",
    "create_learner",
    "learner_from_dict",
]
