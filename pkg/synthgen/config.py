"""World configuration and its YAML file format."""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass, fields
from pathlib import Path
from typing import Any

import yaml

from core.config import HISTORY_LIMIT
from core.errors import ConfigError

WEIGHT_FIELDS = ("alpha_follow", "alpha_interact", "alpha_activity", "beta_topic", "beta_sentiment", "base_rate")


@dataclass(frozen=True)
class WorldConfig:
    """Every knob of a generated world.

    alpha_* weights drive user-dependent reposting, beta_* weights drive
    content-dependent reposting; base_rate is the logit intercept.
    """

    n_users: int = 200
    n_hashtags: int = 4
    posts_per_hashtag: int = 40
    history_length: int = 20
    attachment: int = 3
    reciprocity: float = 0.3
    vocab_size: int = 40
    shared_vocab_size: int = 30
    shared_token_share: float = 0.3
    tokens_per_post: int = 12
    ood_strict: bool = True
    alpha_follow: float = 3.0
    alpha_interact: float = 1.5
    alpha_activity: float = 2.0
    beta_topic: float = 0.0
    beta_sentiment: float = 0.0
    base_rate: float = -3.0
    nonfollower_exposure: float = 0.05
    interest_concentration: float = 0.5
    history_repost_share: float = 0.25
    mention_share: float = 0.1
    start_time: int = 1_700_000_000
    span_days: float = 3.0
    history_days: float = 30.0
    seed: int = 0

    def __post_init__(self) -> None:
        self.validate()

    def validate(self) -> None:
        if self.n_users < 1:
            raise ConfigError(f"n_users must be >= 1, got {self.n_users}")
        if self.n_hashtags < 1:
            raise ConfigError(f"n_hashtags must be >= 1, got {self.n_hashtags}")
        if self.posts_per_hashtag < 0:
            raise ConfigError(f"posts_per_hashtag must be >= 0, got {self.posts_per_hashtag}")
        if not 0 <= self.history_length <= HISTORY_LIMIT:
            raise ConfigError(
                f"history_length must be in [0, {HISTORY_LIMIT}], got {self.history_length}"
            )
        if self.attachment < 1:
            raise ConfigError(f"attachment must be >= 1, got {self.attachment}")
        if self.vocab_size < 1 or self.tokens_per_post < 1 or self.shared_vocab_size < 0:
            raise ConfigError("vocab_size and tokens_per_post must be >= 1, shared_vocab_size >= 0")
        for name in WEIGHT_FIELDS:
            if not math.isfinite(getattr(self, name)):
                raise ConfigError(f"{name} must be finite")
        for name in ("reciprocity", "shared_token_share", "nonfollower_exposure", "history_repost_share", "mention_share"):
            value = getattr(self, name)
            if not 0.0 <= value <= 1.0:
                raise ConfigError(f"{name} must be in [0, 1], got {value}")
        if self.interest_concentration <= 0:
            raise ConfigError("interest_concentration must be > 0")
        if self.span_days <= 0 or self.history_days <= 0:
            raise ConfigError("span_days and history_days must be > 0")
        if self.history_days * 86400 >= self.start_time:
            raise ConfigError("history_days reaches before the epoch; raise start_time")

    @property
    def hashtags(self) -> list[str]:
        width = len(str(self.n_hashtags - 1))
        return [f"topic{i:0{width}d}" for i in range(self.n_hashtags)]

    def to_dict(self) -> dict[str, Any]:
        return asdict(self)

    @classmethod
    def from_dict(cls, data: dict[str, Any]) -> "WorldConfig":
        known = {f.name for f in fields(cls)}
        unknown = sorted(set(data) - known)
        if unknown:
            raise ConfigError(f"unknown world config keys: {', '.join(unknown)}")
        try:
            return cls(**data)
        except TypeError as exc:
            raise ConfigError(f"invalid world config: {exc}") from exc

    @classmethod
    def from_yaml(cls, path: str | Path) -> "WorldConfig":
        path = Path(path)
        if not path.is_file():
            raise FileNotFoundError(f"world config not found: {path}")
        try:
            data = yaml.safe_load(path.read_text(encoding="utf-8"))
        except yaml.YAMLError as exc:
            raise ConfigError(f"{path}: invalid YAML ({exc})") from exc
        if data is None:
            data = {}
        if not isinstance(data, dict):
            raise ConfigError(f"{path}: expected a mapping of config keys")
        data = data.get("world", data)
        if not isinstance(data, dict):
            raise ConfigError(f"{path}: the world section must be a mapping")
        return cls.from_dict(data)

    def to_yaml(self) -> str:
        return yaml.safe_dump(self.to_dict(), sort_keys=False)
