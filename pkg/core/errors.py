"""Exception hierarchy shared by every repostlab module."""

from __future__ import annotations

from pathlib import Path


class RepostLabError(Exception):
    """Base class for errors raised by repostlab itself."""


class CorpusError(RepostLabError, ValueError):
    """Malformed corpus input: bad JSON, duplicate ids, violated invariants."""

    def __init__(
        self,
        message: str,
        *,
        path: str | Path | None = None,
        line_no: int | None = None,
    ) -> None:
        self.path = None if path is None else str(path)
        self.line_no = line_no
        prefix = ""
        if self.path is not None and line_no is not None:
            prefix = f"{self.path}:{line_no}: "
        elif self.path is not None:
            prefix = f"{self.path}: "
        elif line_no is not None:
            prefix = f"line {line_no}: "
        super().__init__(prefix + message)


class SchemaError(RepostLabError, ValueError):
    """Unknown feature schema, dictionary hash mismatch or bad report layout."""


class ConfigError(RepostLabError, ValueError):
    """Invalid configuration values (world, learner or run settings)."""


class SamplingError(RepostLabError, RuntimeError):
    """A sampling procedure could not produce what was asked of it."""


class TrainingError(RepostLabError, RuntimeError):
    """A learner could not be trained on the given data."""


__all__ = [
    "RepostLabError",
    "CorpusError",
    "SchemaError",
    "ConfigError",
    "SamplingError",
    "TrainingError",
]
