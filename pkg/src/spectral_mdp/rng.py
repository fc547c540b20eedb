"""Counter-based random streams.

A :class:`RngState` names a ``(seed, stream)`` pair.  Lanes inside a stream
(one per Monte Carlo replicate) are separate Philox counter blocks, so a
replicate's draws do not depend on how replicates are split across workers.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

_MASK64 = (1 << 64) - 1


@dataclass(frozen=True)
class RngState:
    seed: int
    stream: int = 0

    def __post_init__(self):
        for name in ("seed", "stream"):
            v = getattr(self, name)
            if not isinstance(v, (int, np.integer)) or not 0 <= v <= _MASK64:
                raise ValueError(f"{name} must be an unsigned 64-bit integer, got {v!r}")

    def generator(self, lane: int = 0) -> np.random.Generator:
        """Generator for replicate ``lane``; lanes are 2**128 blocks apart."""
        if not 0 <= lane <= _MASK64:
            raise ValueError(f"lane must be an unsigned 64-bit integer, got {lane}")
        counter = np.array([0, 0, lane, self.stream], dtype=np.uint64)
        return np.random.Generator(np.random.Philox(key=int(self.seed), counter=counter))

    def child(self, stream: int) -> "RngState":
        return RngState(self.seed, stream)
