"""Post-processing fair re-ranking by randomized group interleaving.

The input ranking is split into two queues (protected / non-protected, each
preserving its relative order). Positions are filled top-down: draw u from a
seeded generator; u < p pops the protected queue, otherwise the
non-protected one. Once either queue empties the other is drained with no
further draws. Scores are carried over unchanged and the result is flagged
``reranked`` since it is no longer score-sorted.

Randomness comes from SplitMix64 so any implementation can reproduce
sequences bit-for-bit. Update per draw (64-bit wrapping arithmetic):

    state += 0x9E3779B97F4A7C15
    z = state
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9
    z = (z ^ (z >> 27)) * 0x94D049BB133111EB
    z =  z ^ (z >> 31)
    u = z / 2**64          # uniform in [0, 1)
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import ConfigError
from .measures import Ranking

_MASK = (1 << 64) - 1


class SplitMix64:
    """Deterministic 64-bit generator (see module docstring for constants)."""

    def __init__(self, seed: int):
        self.state = seed & _MASK

    def next_uint64(self) -> int:
        self.state = (self.state + 0x9E3779B97F4A7C15) & _MASK
        z = self.state
        z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK
        z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK
        return z ^ (z >> 31)

    def next_float(self) -> float:
        return self.next_uint64() / 2.0**64


@dataclass(frozen=True)
class RerankConfig:
    p: float  # probability of drawing from the protected queue
    seed: int = 0

    def __post_init__(self):
        if not (0.0 <= self.p <= 1.0):
            raise ConfigError(f"rerank p={self.p} must be in [0, 1]")


def fair_rerank(ranking: Ranking, s_plus: np.ndarray, s_minus: np.ndarray,
                cfg: RerankConfig) -> Ranking:
    is_plus = np.zeros(ranking.n, dtype=bool)
    is_plus[np.asarray(s_plus)] = True
    queue_plus = [i for i in ranking.order.tolist() if is_plus[i]]
    queue_minus = [i for i in ranking.order.tolist() if not is_plus[i]]

    gen = SplitMix64(cfg.seed)
    out: list[int] = []
    a, b = 0, 0  # heads of the two queues
    while a < len(queue_plus) and b < len(queue_minus):
        if gen.next_float() < cfg.p:
            out.append(queue_plus[a])
            a += 1
        else:
            out.append(queue_minus[b])
            b += 1
    out.extend(queue_plus[a:])
    out.extend(queue_minus[b:])

    return Ranking(
        order=np.asarray(out, dtype=np.int64),
        scores=ranking.scores,
        k=ranking.k,
        reranked=True,
    )
