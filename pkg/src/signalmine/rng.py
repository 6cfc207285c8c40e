"""Deterministic, splittable randomness.

Every random choice in the pipeline flows from a single integer seed plus a
key path (mine id, doc id, stage name, ...). Streams for different keys are
independent, so documents can be processed in any order or in parallel
without changing the output.
"""

from __future__ import annotations

import hashlib
import random


def derive_seed(seed: int, *key: object) -> int:
    material = str(int(seed)).encode() + b"\x1f" + b"\x1f".join(str(k).encode() for k in key)
    return int.from_bytes(hashlib.sha256(material).digest()[:8], "big")


def derive_rng(seed: int, *key: object) -> random.Random:
    """A private RNG for the given key path. Same seed + key => same stream."""
    return random.Random(derive_seed(seed, *key))
