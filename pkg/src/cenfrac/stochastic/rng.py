"""Seeded, splittable random streams.

A stream is identified by (seed, stream_index); identical pairs reproduce
identical sample sequences, distinct indices give statistically independent
streams (PCG64 seeded through SeedSequence spawn keys).  Batch estimators
further split a stream into fixed-size chunk substreams, so results do not
depend on the number of worker threads.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..errors import DomainError


@dataclass(frozen=True)
class RngStream:
    seed: int
    stream_index: int = 0

    def __post_init__(self):
        if int(self.seed) < 0 or int(self.stream_index) < 0:
            raise DomainError("seed and stream_index must be nonnegative integers")

    def generator(self) -> np.random.Generator:
        seq = np.random.SeedSequence(
            entropy=int(self.seed), spawn_key=(int(self.stream_index),)
        )
        return np.random.Generator(np.random.PCG64(seq))

    def chunk_generator(self, chunk: int) -> np.random.Generator:
        """Generator for a fixed chunk substream; reduction order over
        chunks is fixed, making estimates thread-count independent."""
        seq = np.random.SeedSequence(
            entropy=int(self.seed), spawn_key=(int(self.stream_index), int(chunk))
        )
        return np.random.Generator(np.random.PCG64(seq))
