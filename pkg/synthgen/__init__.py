"""Synthetic social worlds with tunable user- and content-driven reposting."""

from __future__ import annotations

from core.corpus import Corpus
from synthgen.cascades import CascadeResult, Exposure, generate_cascades
from synthgen.config import WorldConfig
from synthgen.world import World, generate_world


def synthesize(config: WorldConfig) -> tuple[World, CascadeResult, Corpus]:
    """World, cascades and the resulting corpus in one call."""
    world = generate_world(config)
    cascades = generate_cascades(world, config)
    return world, cascades, world.corpus(cascades.reposts)


__all__ = [
    "CascadeResult",
    "Exposure",
    "World",
    "WorldConfig",
    "generate_cascades",
    "generate_world",
    "synthesize",
]
