"""Splittable, reproducible random streams.

A stream is keyed by ``(seed, stream)``; sub-streams (chunks of a Monte Carlo
run) extend the key. Draws depend only on the key, never on which worker
consumes them, which makes sharded runs independent of the shard count.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DomainError


@dataclass(frozen=True)
class RandomStream:
    seed: int
    stream: int = 0

    def __post_init__(self):
        if not 0 <= int(self.seed) < 2 ** 64:
            raise DomainError("seed must be a 64-bit unsigned integer")
        if int(self.stream) < 0:
            raise DomainError("stream index must be non-negative")

    def generator(self, *sub: int) -> np.random.Generator:
        """A Philox generator for this stream, or for a sub-stream of it."""
        ss = np.random.SeedSequence(int(self.seed), spawn_key=(int(self.stream), *map(int, sub)))
        return np.random.Generator(np.random.Philox(ss))

    def child(self, index: int) -> "RandomStream":
        """An independent stream derived from this one (used for experiments)."""
        ss = np.random.SeedSequence(int(self.seed), spawn_key=(int(self.stream), 2 ** 31 + int(index)))
        return RandomStream(int(ss.generate_state(1, np.uint64)[0]), 0)

    @property
    def provenance(self) -> tuple[int, int]:
        return int(self.seed), int(self.stream)


def chunk_sizes(n: int, chunk: int) -> list[int]:
    """Split ``n`` draws into fixed-size chunks (last one possibly shorter)."""
    full, rest = divmod(int(n), int(chunk))
    return [chunk] * full + ([rest] if rest else [])
