"""Split protocols: mixed and per-hashtag Monte Carlo, leave-one-hashtag-out, temporal.

Every protocol applies the leakage filter between each fold's train and test
parts, so no sender-recipient pair appears on both sides.
"""

from __future__ import annotations

import logging
import math
from collections import defaultdict
from dataclasses import dataclass, field
from typing import Any, Sequence

import numpy as np

from core.config import (
    LOHO_SUBSETS,
    MC_FRACTIONS,
    MC_REPEATS,
    PROTOCOLS,
    TEMPORAL_TRAIN_WINDOWS,
    TEMPORAL_VAL_FRACTION,
    TEMPORAL_WINDOWS,
)
from core.errors import ConfigError, SamplingError, SchemaError
from core.model import Instance
from dataset.build import LabeledDataset
from dataset.leakage import leakage_filter

logger = logging.getLogger(__name__)

MIXED_GROUP = "mixed"


@dataclass(frozen=True)
class Fold:
    train: tuple[str, ...]
    val: tuple[str, ...]
    test: tuple[str, ...]
    group: str = MIXED_GROUP
    removed: int = 0

    def to_dict(self) -> dict[str, Any]:
        return {
            "train": list(self.train),
            "val": list(self.val),
            "test": list(self.test),
            "group": self.group,
            "removed": self.removed,
        }

    @classmethod
    def from_dict(cls, data: dict[str, Any]) -> "Fold":
        return cls(
            train=tuple(data["train"]),
            val=tuple(data["val"]),
            test=tuple(data["test"]),
            group=str(data.get("group", MIXED_GROUP)),
            removed=int(data.get("removed", 0)),
        )


@dataclass
class SplitPlan:
    protocol: str
    seed: int
    folds: list[Fold] = field(default_factory=list)
    params: dict[str, Any] = field(default_factory=dict)
    removed_cross_hashtag: int = 0

    def groups(self) -> list[str]:
        seen: dict[str, None] = {}
        for fold in self.folds:
            seen.setdefault(fold.group, None)
        return list(seen)

    def to_dict(self) -> dict[str, Any]:
        return {
            "protocol": self.protocol,
            "seed": self.seed,
            "params": dict(self.params),
            "removed_cross_hashtag": self.removed_cross_hashtag,
            "folds": [f.to_dict() for f in self.folds],
        }

    @classmethod
    def from_dict(cls, data: dict[str, Any]) -> "SplitPlan":
        if data.get("protocol") not in PROTOCOLS:
            raise SchemaError(f"unknown split protocol {data.get('protocol')!r}")
        return cls(
            protocol=data["protocol"],
            seed=int(data["seed"]),
            folds=[Fold.from_dict(f) for f in data.get("folds", [])],
            params=dict(data.get("params", {})),
            removed_cross_hashtag=int(data.get("removed_cross_hashtag", 0)),
        )


def _ids(instances: Sequence[Instance]) -> tuple[str, ...]:
    return tuple(inst.instance_id for inst in instances)


def _make_fold(
    train: Sequence[Instance],
    val: Sequence[Instance],
    test: Sequence[Instance],
    group: str,
) -> Fold:
    kept, removed = leakage_filter(train, test)
    kept_val, removed_val = leakage_filter(val, test)
    return Fold(
        train=_ids(kept),
        val=_ids(kept_val),
        test=_ids(test),
        group=group,
        removed=removed + removed_val,
    )


def _mc_sizes(n: int, fractions: Sequence[float]) -> tuple[int, int, int]:
    if len(fractions) != 3 or not math.isclose(sum(fractions), 1.0, abs_tol=1e-9):
        raise ConfigError(f"split fractions must be three values summing to 1, got {tuple(fractions)}")
    n_test = int(round(fractions[2] * n))
    n_val = int(round(fractions[1] * n))
    n_train = n - n_test - n_val
    if min(n_train, n_val, n_test) <= 0:
        raise SamplingError(f"{n} instances are too few for non-empty {tuple(fractions)} parts")
    return n_train, n_val, n_test


def _mc_folds(
    instances: Sequence[Instance],
    repeats: int,
    fractions: Sequence[float],
    seed_key: list[int],
    group: str,
) -> list[Fold]:
    _, n_val, n_test = _mc_sizes(len(instances), fractions)
    folds = []
    for repeat in range(repeats):
        rng = np.random.default_rng([*seed_key, repeat])
        order = rng.permutation(len(instances))
        test_idx = np.sort(order[:n_test])
        val_idx = np.sort(order[n_test : n_test + n_val])
        train_idx = np.sort(order[n_test + n_val :])
        folds.append(
            _make_fold(
                [instances[i] for i in train_idx],
                [instances[i] for i in val_idx],
                [instances[i] for i in test_idx],
                group,
            )
        )
    return folds


def split_monte_carlo(
    dataset: LabeledDataset,
    repeats: int = MC_REPEATS,
    fractions: Sequence[float] = MC_FRACTIONS,
    seed: int = 0,
) -> SplitPlan:
    """Uniform (unstratified) 63/7/30 shuffles over the whole dataset."""
    folds = _mc_folds(dataset.instances, repeats, fractions, [seed], MIXED_GROUP)
    plan = SplitPlan("mixed-mc", seed, folds, {"repeats": repeats, "fractions": list(fractions)})
    _log_plan(plan)
    return plan


def split_per_hashtag_mc(
    dataset: LabeledDataset,
    repeats: int = MC_REPEATS,
    fractions: Sequence[float] = MC_FRACTIONS,
    seed: int = 0,
) -> SplitPlan:
    """Monte Carlo splits run separately inside every hashtag; fold.group is the hashtag."""
    by_tag = _by_hashtag(dataset.instances)
    folds: list[Fold] = []
    for h, tag in enumerate(sorted(by_tag)):
        try:
            folds += _mc_folds(by_tag[tag], repeats, fractions, [seed, h], tag)
        except SamplingError as exc:
            logger.warning("hashtag %s skipped: %s", tag, exc)
    if not folds:
        raise SamplingError("no hashtag has enough instances for a Monte Carlo split")
    plan = SplitPlan("perhash-mc", seed, folds, {"repeats": repeats, "fractions": list(fractions)})
    _log_plan(plan)
    return plan


def _by_hashtag(instances: Sequence[Instance]) -> dict[str, list[Instance]]:
    out: dict[str, list[Instance]] = defaultdict(list)
    for inst in instances:
        out[inst.hashtag].append(inst)
    return dict(out)


def remove_cross_hashtag_pairs(instances: Sequence[Instance]) -> tuple[list[Instance], int]:
    """Drop every instance whose sender-recipient pair occurs under more than one hashtag."""
    tags_per_pair: dict[tuple[str, str], set[str]] = defaultdict(set)
    for inst in instances:
        tags_per_pair[inst.pair].add(inst.hashtag)
    kept = [inst for inst in instances if len(tags_per_pair[inst.pair]) == 1]
    return kept, len(instances) - len(kept)


def split_leave_one_hashtag_out(
    dataset: LabeledDataset,
    target_hashtag: str | None = None,
    subsets: int = LOHO_SUBSETS,
    seed: int = 0,
) -> SplitPlan:
    """Out-of-distribution folds: test on one hashtag, train/validate on the others.

    With target_hashtag=None every hashtag takes a turn as the test hashtag.
    """
    instances, removed = remove_cross_hashtag_pairs(dataset.instances)
    if removed:
        logger.info("removed %d instances with sender-recipient pairs spanning hashtags", removed)
    by_tag = _by_hashtag(instances)
    tags = sorted(by_tag)
    if len(tags) < 2:
        raise SamplingError(f"leave-one-hashtag-out needs at least 2 hashtags, found {len(tags)}")
    if target_hashtag is not None and target_hashtag not in by_tag:
        raise ConfigError(f"hashtag {target_hashtag!r} not in dataset (have: {', '.join(tags)})")
    targets = tags if target_hashtag is None else [target_hashtag]

    folds: list[Fold] = []
    for target in targets:
        test = by_tag[target]
        rest = [inst for inst in instances if inst.hashtag != target]
        if len(rest) < subsets:
            raise SamplingError(f"{len(rest)} training instances cannot fill {subsets} subsets")
        rng = np.random.default_rng([seed, tags.index(target)])
        parts = np.array_split(rng.permutation(len(rest)), subsets)
        for i in range(subsets):
            val_idx = np.sort(parts[i])
            train_idx = np.sort(np.concatenate([p for j, p in enumerate(parts) if j != i]))
            folds.append(
                _make_fold(
                    [rest[k] for k in train_idx],
                    [rest[k] for k in val_idx],
                    test,
                    target,
                )
            )
    plan = SplitPlan(
        "loho-ood",
        seed,
        folds,
        {"target_hashtag": target_hashtag, "subsets": subsets},
        removed_cross_hashtag=removed,
    )
    _log_plan(plan)
    return plan


def temporal_windows(instances: Sequence[Instance], windows: int) -> list[list[Instance]]:
    """Windows holding equal numbers of positives (remainder to the last).

    Each window ends at the timestamp of its last positive; instances sharing
    that timestamp stay in the earlier window.
    """
    positives = sorted((i for i in instances if i.label == 1), key=lambda i: (i.event_time, i.instance_id))
    if len(positives) < windows:
        raise SamplingError(f"{len(positives)} positives cannot fill {windows} temporal windows")
    per = len(positives) // windows
    bounds = [positives[(w + 1) * per - 1].event_time for w in range(windows - 1)]
    out: list[list[Instance]] = [[] for _ in range(windows)]
    for inst in sorted(instances, key=lambda i: (i.event_time, i.instance_id)):
        w = next((k for k, b in enumerate(bounds) if inst.event_time <= b), windows - 1)
        out[w].append(inst)
    return out


def split_temporal(
    dataset: LabeledDataset,
    hashtag: str | None = None,
    windows: int = TEMPORAL_WINDOWS,
    train_windows: int = TEMPORAL_TRAIN_WINDOWS,
    seed: int = 0,
) -> SplitPlan:
    """Rolling folds per hashtag: train on `train_windows` windows, test on the next.

    The latest 10% of each fold's training instances become its validation part.
    """
    if train_windows < 1 or train_windows >= windows:
        raise ConfigError(f"train_windows must be in [1, {windows - 1}], got {train_windows}")
    by_tag = _by_hashtag(dataset.instances)
    if hashtag is not None and hashtag not in by_tag:
        raise ConfigError(f"hashtag {hashtag!r} not in dataset")
    tags = sorted(by_tag) if hashtag is None else [hashtag]

    folds: list[Fold] = []
    for tag in tags:
        try:
            parts = temporal_windows(by_tag[tag], windows)
        except SamplingError as exc:
            if hashtag is not None:
                raise
            logger.warning("hashtag %s skipped: %s", tag, exc)
            continue
        for start in range(windows - train_windows):
            train = [inst for w in parts[start : start + train_windows] for inst in w]
            test = parts[start + train_windows]
            if not test:
                logger.warning("hashtag %s fold %d: empty test window", tag, start + 1)
            n_val = int(round(TEMPORAL_VAL_FRACTION * len(train)))
            cut = len(train) - n_val
            folds.append(_make_fold(train[:cut], train[cut:], test, tag))
    if not folds:
        raise SamplingError("no hashtag has enough positives for temporal windows")
    plan = SplitPlan(
        "temporal",
        seed,
        folds,
        {"hashtag": hashtag, "windows": windows, "train_windows": train_windows},
    )
    _log_plan(plan)
    return plan


def make_split(dataset: LabeledDataset, protocol: str, seed: int, **kwargs: Any) -> SplitPlan:
    if protocol == "mixed-mc":
        return split_monte_carlo(dataset, seed=seed, **kwargs)
    if protocol == "perhash-mc":
        return split_per_hashtag_mc(dataset, seed=seed, **kwargs)
    if protocol == "loho-ood":
        return split_leave_one_hashtag_out(dataset, seed=seed, **kwargs)
    if protocol == "temporal":
        return split_temporal(dataset, seed=seed, **kwargs)
    raise ConfigError(f"unknown split protocol {protocol!r} (expected one of {', '.join(PROTOCOLS)})")


def _log_plan(plan: SplitPlan) -> None:
    removed = sum(f.removed for f in plan.folds)
    logger.info(
        "%s plan: %d folds over %d groups, %d train instances removed by the leakage filter",
        plan.protocol,
        len(plan.folds),
        len(plan.groups()),
        removed,
    )
