"""Deterministic seed derivation.

Randomized routines never share one RNG stream; each (operation, level,
component, ...) scope derives its own child seed so results do not depend
on processing order or worker count.
"""
from __future__ import annotations

import hashlib
import random


def derive_seed(seed: int, *tags: object) -> int:
    """Derive a stable 64-bit child seed from a parent seed and tags."""
    material = repr((int(seed),) + tags).encode("utf-8")
    digest = hashlib.blake2b(material, digest_size=8).digest()
    return int.from_bytes(digest, "big")


def derive_rng(seed: int, *tags: object) -> random.Random:
    """Independent `random.Random` for the scope identified by `tags`."""
    return random.Random(derive_seed(seed, *tags))
