"""Sender-recipient pair leakage filtering between train and test."""

from __future__ import annotations

import logging
from typing import Sequence

from core.model import Instance

logger = logging.getLogger(__name__)


def leakage_filter(train: Sequence[Instance], test: Sequence[Instance]) -> tuple[list[Instance], int]:
    """Drop train instances whose (sender, recipient) pair occurs in test.

    Returns the kept instances (order preserved) and the number removed.
    """
    test_pairs = {inst.pair for inst in test}
    kept = [inst for inst in train if inst.pair not in test_pairs]
    removed = len(train) - len(kept)
    if train and not kept:
        logger.warning("leakage filter removed all %d training instances", removed)
    elif removed:
        logger.debug("leakage filter removed %d of %d training instances", removed, len(train))
    return kept, removed
