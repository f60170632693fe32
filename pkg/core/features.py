"""The 303-feature dictionary, its schema subsets and per-feature metadata."""

from __future__ import annotations

import hashlib
from dataclasses import dataclass
from functools import cache

from core.errors import SchemaError

SCHEMA_IDS = ("M", "U-P", "U-HA", "U-HM", "U", "ALL")

TOPIC_M_LABELS = (
    "arts_culture",
    "business_entrepreneurs",
    "celebrity_pop_culture",
    "diaries_daily_life",
    "family",
    "fashion_style",
    "film_tv_video",
    "fitness_health",
    "food_dining",
    "gaming",
    "learning_educational",
    "music",
    "news_social_concern",
    "other_hobbies",
    "relationships",
    "science_technology",
    "sports",
    "travel_adventure",
    "youth_student_life",
)
TOPIC_G_LABELS = (
    "arts_culture",
    "business_entrepreneurs",
    "pop_culture",
    "daily_life",
    "sports_gaming",
    "science_technology",
)
EMOTION_LABELS = ("anger", "joy", "fear", "disgust", "surprise", "sad", "others")
HATE_LABELS = ("aggressive", "hateful", "targeted")
READABILITY_LABELS = (
    "Kincaid",
    "ARI",
    "ColemanLiau",
    "FleschReadingEase",
    "GunningFogIndex",
    "SMOGIndex",
    "LIX",
    "RIX",
    "DaleChallIndex",
    "PolysyllableCount",
    "DaleChallUnfamiliarCount",
)
LDA_TOPICS = 10
SENTIMENT_LABELS = ("negative", "neutral", "positive")

PROFILE_FIELDS = (
    "AccountAge",
    "FollowerNum",
    "FolloweeNum",
    "TweetNum",
    "ListedNum",
    "SpreadActivity",
    "FollowerNumDay",
    "FolloweeNumDay",
    "TweetNumDay",
    "ListedNumDay",
    "ProfileVerified",
    "ProfileUrl",
)
NETWORK_FIELDS = ("LeaderRank", "Indegree")
ACTIVITY_FIELDS = (
    "TweetNum",
    "TweetPercent",
    "RetweetPercent",
    "QuotePercent",
    "ReplyPercent",
    "InteractivePer",
    "AverageInterval",
)
POPULARITY_FIELDS = ("RetweetedRate", "QuotedRate", "RepliedRate", "LikedRate")
INTERACTION_FIELDS = (
    ("RS_Mention", "RS_MentionPer", "SR_Mention", "SR_MentionPer", "RS_RepostLatency")
    + tuple(f"SR_TORS{k}" for k in range(1, LDA_TOPICS + 1))
    + ("SR_PathWidth",)
)


@dataclass(frozen=True)
class FeatureInfo:
    name: str
    type: str
    subtype: str
    categorical: bool = False


def _post_entries() -> list[tuple[str, str, bool]]:
    out: list[tuple[str, str, bool]] = []
    out += [(f"TopicM{k}", "topic", False) for k in range(1, len(TOPIC_M_LABELS) + 1)]
    out += [("TopicMMain", "topic", True), ("TopicMNum", "topic", False)]
    out += [(f"TopicG{k}", "topic", False) for k in range(1, len(TOPIC_G_LABELS) + 1)]
    out += [("TopicGMain", "topic", True), ("TopicGNum", "topic", False)]
    out += [(f"TopicLDA{k}", "topic", False) for k in range(1, LDA_TOPICS + 1)]
    for name in (
        "CharNum",
        "WordNum",
        "Grammar1",
        "Grammar2",
        "Polarity",
        "Subjectivity",
        "Irony",
        "Offensive",
        "Emoji",
        "Masculinity",
    ):
        out.append((name, "language", name == "Emoji"))
    out += [(f"Readability{k}", "readability", False) for k in range(1, len(READABILITY_LABELS) + 1)]
    out += [(f"Sentiment{k}", "sentiment", False) for k in range(1, 5)]
    out += [("SentimentMain", "sentiment", True)]
    out += [(f"Emotion{k}", "emotion", False) for k in range(1, len(EMOTION_LABELS) + 1)]
    out += [("EmotionMain", "emotion", True)]
    out += [(f"Hate{k}", "hate-speech", False) for k in range(1, len(HATE_LABELS) + 1)]
    out += [("HsNum", "hate-speech", False)]
    out += [("hashtag", "hashtag", True)]
    return out


@cache
def _schema_infos(schema_id: str) -> tuple[FeatureInfo, ...]:
    post = _post_entries()
    if schema_id == "M":
        return tuple(FeatureInfo(f"M_{n}", "M", sub, cat) for n, sub, cat in post)
    if schema_id == "U-P":
        infos: list[FeatureInfo] = []
        for side, other in (("S", "R"), ("R", "S")):
            infos += [FeatureInfo(f"U-P_{side}_{f}", "U-P", "profile") for f in PROFILE_FIELDS]
            infos += [FeatureInfo(f"U-P_{side}_{f}", "U-P", "network") for f in NETWORK_FIELDS]
            infos.append(FeatureInfo(f"U-P_{side}_Follow{other}", "U-P", "network"))
        return tuple(infos)
    if schema_id == "U-HA":
        infos = []
        for side in ("S", "R"):
            infos += [FeatureInfo(f"U-HA_{side}_{f}", "U-HA", "activity") for f in ACTIVITY_FIELDS]
            infos += [FeatureInfo(f"U-HA_{side}_{f}", "U-HA", "popularity") for f in POPULARITY_FIELDS]
        infos += [FeatureInfo(f"U-HA_{f}", "U-HA", "interaction") for f in INTERACTION_FIELDS]
        return tuple(infos)
    if schema_id == "U-HM":
        infos = []
        for side in ("S", "R"):
            infos += [FeatureInfo(f"U-HM_{side}_{n}", "U-HM", sub) for n, sub, _ in post]
        infos.append(FeatureInfo("U-HM_SR_TopicSim", "U-HM", "topic"))
        return tuple(infos)
    if schema_id == "U":
        return _schema_infos("U-P") + _schema_infos("U-HA") + _schema_infos("U-HM")
    if schema_id == "ALL":
        return _schema_infos("M") + _schema_infos("U")
    raise SchemaError(f"Unknown feature schema: {schema_id!r} (expected one of {', '.join(SCHEMA_IDS)})")


def feature_dictionary(schema_id: str) -> list[str]:
    """Ordered feature names of a schema (ALL = M ∥ U-P ∥ U-HA ∥ U-HM)."""
    return [info.name for info in _schema_infos(schema_id)]


def feature_metadata(schema_id: str) -> list[FeatureInfo]:
    return list(_schema_infos(schema_id))


def schema_size(schema_id: str) -> int:
    return len(_schema_infos(schema_id))


@cache
def _name_index() -> dict[str, FeatureInfo]:
    return {info.name: info for info in _schema_infos("ALL")}


def feature_info(name: str) -> FeatureInfo:
    try:
        return _name_index()[name]
    except KeyError:
        raise SchemaError(f"Unknown feature name: {name!r}") from None


def categorical_features(schema_id: str = "ALL") -> list[str]:
    return [info.name for info in _schema_infos(schema_id) if info.categorical]


def schema_slice(schema_id: str) -> slice:
    """Position of a schema's block inside the ALL vector."""
    offsets = {
        "M": 0,
        "U-P": schema_size("M"),
        "U-HA": schema_size("M") + schema_size("U-P"),
        "U-HM": schema_size("M") + schema_size("U-P") + schema_size("U-HA"),
        "U": schema_size("M"),
        "ALL": 0,
    }
    if schema_id not in offsets:
        raise SchemaError(f"Unknown feature schema: {schema_id!r}")
    start = offsets[schema_id]
    return slice(start, start + schema_size(schema_id))


def dictionary_hash(names: list[str] | str) -> str:
    """sha256 over the ordered names; accepts a schema id or a name list."""
    if isinstance(names, str):
        names = feature_dictionary(names)
    payload = "\n".join(names).encode("utf-8")
    return hashlib.sha256(payload).hexdigest()


def schema_for_columns(columns: list[str]) -> str | None:
    """Return the schema id whose dictionary equals `columns`, if any."""
    for schema_id in SCHEMA_IDS:
        if feature_dictionary(schema_id) == list(columns):
            return schema_id
    return None


__all__ = [
    "SCHEMA_IDS",
    "FeatureInfo",
    "feature_dictionary",
    "feature_metadata",
    "feature_info",
    "schema_size",
    "schema_slice",
    "categorical_features",
    "dictionary_hash",
    "schema_for_columns",
]
