"""Labelled dataset construction for the 1:1, 1:5, 1:10 and general-1:5 schemes."""

from __future__ import annotations

import logging
from collections import Counter, defaultdict
from dataclasses import dataclass, field
from typing import Any

import numpy as np

from core.config import GENERAL_NEGATIVES, NEAREST_NEGATIVES, RANDOM_NEGATIVES, RATIO_TAGS
from core.corpus import Corpus
from core.errors import ConfigError, SchemaError
from core.model import Instance, RepostEvent
from dataset.negatives import (
    CandidateIndex,
    general_negatives,
    negative_pool,
    random_negatives,
    select_negatives,
)
from dataset.positives import scan_positives
from userfeat.extract import InstanceFeaturizer, fit_topic_model

logger = logging.getLogger(__name__)

DATASET_FORMAT = 1


@dataclass
class BuildReport:
    scan: dict[str, int] = field(default_factory=dict)
    untagged: int = 0
    empty_pool: int = 0
    deficit: int = 0
    positives: int = 0
    negatives: int = 0

    def to_dict(self) -> dict[str, Any]:
        return {
            "scan": dict(self.scan),
            "untagged": self.untagged,
            "empty_pool": self.empty_pool,
            "deficit": self.deficit,
            "positives": self.positives,
            "negatives": self.negatives,
        }


@dataclass
class LabeledDataset:
    ratio_tag: str
    seed: int
    instances: list[Instance]
    report: BuildReport = field(default_factory=BuildReport)

    def __len__(self) -> int:
        return len(self.instances)

    @property
    def labels(self) -> np.ndarray:
        return np.asarray([inst.label for inst in self.instances], dtype=np.int64)

    def by_id(self) -> dict[str, Instance]:
        return {inst.instance_id: inst for inst in self.instances}

    def hashtag_index(self) -> dict[str, list[str]]:
        """Instance ids per hashtag, in dataset order."""
        index: dict[str, list[str]] = defaultdict(list)
        for inst in self.instances:
            index[inst.hashtag].append(inst.instance_id)
        return dict(index)

    def hashtags(self) -> list[str]:
        return sorted({inst.hashtag for inst in self.instances})

    def label_counts(self) -> dict[int, int]:
        counts = Counter(inst.label for inst in self.instances)
        return {0: counts.get(0, 0), 1: counts.get(1, 0)}

    def to_dict(self) -> dict[str, Any]:
        return {
            "format": DATASET_FORMAT,
            "ratio_tag": self.ratio_tag,
            "seed": self.seed,
            "report": self.report.to_dict(),
            "instances": [
                {
                    "instance_id": inst.instance_id,
                    "post_id": inst.post.post_id,
                    "sender_id": inst.sender.user_id,
                    "recipient_id": inst.recipient.user_id,
                    "event_time": inst.event_time,
                    "hashtag": inst.hashtag,
                    "label": inst.label,
                }
                for inst in self.instances
            ],
        }

    @classmethod
    def from_dict(cls, data: dict[str, Any], corpus: Corpus) -> "LabeledDataset":
        if data.get("format") != DATASET_FORMAT:
            raise SchemaError(f"unsupported dataset format: {data.get('format')!r}")
        instances = []
        for row in data["instances"]:
            try:
                post = corpus.known_posts[row["post_id"]]
                sender = corpus.users[row["sender_id"]]
                recipient = corpus.users[row["recipient_id"]]
            except KeyError as exc:
                raise SchemaError(
                    f"dataset instance {row.get('instance_id')!r} refers to unknown id {exc.args[0]!r}"
                ) from None
            instances.append(
                Instance(
                    instance_id=row["instance_id"],
                    post=post,
                    sender=sender,
                    recipient=recipient,
                    event_time=int(row["event_time"]),
                    hashtag=row["hashtag"],
                    label=int(row["label"]),
                )
            )
        report = BuildReport(**{k: v for k, v in data.get("report", {}).items()})
        return cls(ratio_tag=data["ratio_tag"], seed=int(data["seed"]), instances=instances, report=report)


def positive_instance(corpus: Corpus, event: RepostEvent) -> Instance:
    return Instance(
        instance_id=Instance.positive_id(event.original.post_id, event.recipient_id),
        post=event.original,
        sender=corpus.users[event.sender_id],
        recipient=corpus.users[event.recipient_id],
        event_time=event.repost_time,
        hashtag=event.original.primary_hashtag or "",
        label=1,
    )


def build_dataset(
    corpus: Corpus,
    ratio_tag: str,
    seed: int,
    *,
    featurizer: InstanceFeaturizer | None = None,
) -> LabeledDataset:
    """Deterministic in (corpus, ratio_tag, seed).

    Positives whose pool cannot supply the scheme's negatives are left out
    and counted in the report.
    """
    if ratio_tag not in RATIO_TAGS:
        raise ConfigError(f"unknown ratio tag {ratio_tag!r} (expected one of {', '.join(RATIO_TAGS)})")
    scan = scan_positives(corpus)
    report = BuildReport(scan=scan.to_dict())
    events = []
    for event in scan.events:
        if event.original.primary_hashtag is None:
            report.untagged += 1
            continue
        events.append(event)

    instances: list[Instance] = []
    if ratio_tag == "general-1:5":
        instances = [positive_instance(corpus, e) for e in events]
        negatives = general_negatives(corpus, events, GENERAL_NEGATIVES, seed)
        instances.extend(negatives)
        report.positives = len(events)
        report.negatives = len(negatives)
    else:
        if featurizer is None:
            featurizer = InstanceFeaturizer(corpus, fit_topic_model(corpus))
        index = CandidateIndex(corpus)
        rng = np.random.default_rng(seed)
        n_near = NEAREST_NEGATIVES[ratio_tag]
        n_random = RANDOM_NEGATIVES[ratio_tag]
        for event in events:
            pool = negative_pool(event, corpus, index)
            if not pool:
                report.empty_pool += 1
                continue
            nearest = select_negatives(event, pool, n_near, featurizer.similarity_vector, corpus)
            if nearest.deficit:
                report.deficit += 1
                continue
            negatives = list(nearest.instances)
            if n_random:
                chosen = {inst.post.post_id for inst in negatives}
                extra = random_negatives(event, n_random, chosen, index, rng)
                if extra.deficit:
                    report.deficit += 1
                    continue
                negatives.extend(extra.instances)
            instances.append(positive_instance(corpus, event))
            instances.extend(negatives)
            report.positives += 1
            report.negatives += len(negatives)

    if report.empty_pool or report.deficit:
        logger.warning(
            "%s: %d positives had an empty pool and %d could not fill their negatives; both excluded",
            ratio_tag,
            report.empty_pool,
            report.deficit,
        )
    logger.info(
        "built %s dataset: %d positives, %d negatives", ratio_tag, report.positives, report.negatives
    )
    return LabeledDataset(ratio_tag=ratio_tag, seed=seed, instances=instances, report=report)
