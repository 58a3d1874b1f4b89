# 2026-10-19 | v0.3.0 | Named random streams derived from one run seed
import zlib
from dataclasses import dataclass

import numpy as np


@dataclass(frozen=True)
class SeedStreams:
    """
    Every random draw of a run comes from a stream named by where it is
    used (e.g. ("family", disjunct_index, "attempt", 3)). Streams are
    independent of the order in which they are requested.
    """

    seed: int = 0

    def _sequence(self, names) -> np.random.SeedSequence:
        key = tuple(zlib.crc32(str(n).encode("utf-8")) for n in names)
        return np.random.SeedSequence(self.seed, spawn_key=key)

    def generator(self, *names) -> np.random.Generator:
        return np.random.default_rng(self._sequence(names))

    def child_seed(self, *names) -> int:
        return int(self._sequence(names).generate_state(1, dtype=np.uint32)[0])
