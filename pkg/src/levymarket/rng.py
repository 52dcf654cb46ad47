"""Deterministic seed derivation for ensembles.

Every stream in the package is derived from a single top-level 64-bit seed
with :func:`child_seed`, so results never depend on generation order or on
how work is split across workers. The mixing function is fixed arithmetic
(SplitMix64 over the seed and each part) and must not change between
releases; persisted outputs depend on it.
"""

from __future__ import annotations

import numpy as np

_MASK64 = 0xFFFFFFFFFFFFFFFF
_GOLDEN = 0x9E3779B97F4A7C15


def splitmix64(x: int) -> int:
    """One SplitMix64 output step for the 64-bit state ``x``."""
    x = (x + _GOLDEN) & _MASK64
    z = x
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK64
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK64
    return z ^ (z >> 31)


def _part_to_int(part: int | str) -> int:
    if isinstance(part, str):
        # FNV-1a 64 over the UTF-8 bytes; stable across platforms.
        h = 0xCBF29CE484222325
        for b in part.encode("utf-8"):
            h = ((h ^ b) * 0x100000001B3) & _MASK64
        return h
    return part & _MASK64


def child_seed(seed: int, *parts: int | str) -> int:
    """Derive a 64-bit child seed from ``seed`` and a path of parts.

    The derivation is ``h = splitmix64(seed)`` followed by
    ``h = splitmix64(h ^ splitmix64(part))`` for each part in order.
    Collisions between distinct part paths are as unlikely as 64-bit
    hash collisions; the same path always yields the same child.
    """
    h = splitmix64(seed & _MASK64)
    for part in parts:
        h = splitmix64(h ^ splitmix64(_part_to_int(part)))
    return h


def make_rng(seed: int, *parts: int | str) -> np.random.Generator:
    """A PCG64 generator seeded from ``child_seed(seed, *parts)``."""
    return np.random.default_rng(child_seed(seed, *parts))
