"""Deterministic seeded random stream management.

Every source of randomness in a simulation is an independent numpy
Generator derived from a single 64-bit root seed through (label, index)
keys.  Derivation is a pure function of the key, so runs are bit-for-bit
reproducible and replicas can be fanned out in any order or in parallel.
"""

from __future__ import annotations

import hashlib
from dataclasses import dataclass

import numpy as np


def _digest(root: int, label: str, index: int) -> bytes:
    h = hashlib.sha256()
    h.update(root.to_bytes(8, "little"))
    h.update(label.encode("utf-8"))
    h.update(b"\x00")
    h.update(int(index).to_bytes(8, "little", signed=True))
    return h.digest()


@dataclass(frozen=True)
class SeedTree:
    """Hierarchical seed derivation keyed by (label, index) pairs."""

    root: int

    def __post_init__(self):
        if not 0 <= self.root < 2**64:
            raise ValueError("root seed must fit in an unsigned 64-bit integer")

    def stream(self, label: str, index: int = 0) -> np.random.Generator:
        """Independent Generator for the given key."""
        seed = int.from_bytes(_digest(self.root, label, index)[:16], "little")
        return np.random.Generator(np.random.PCG64(np.random.SeedSequence(seed)))

    def child(self, label: str, index: int = 0) -> "SeedTree":
        """Sub-tree rooted at a derived 64-bit seed."""
        root = int.from_bytes(_digest(self.root, label, index)[16:24], "little")
        return SeedTree(root)
