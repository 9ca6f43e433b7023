"""Counter-based uniform draws.

Every draw is a pure function of (seed, round, arm): the generator is
Philox-4x64 with 10 rounds, keyed by the 128-bit value (seed, 0) and started
at the 256-bit counter (round, arm, 0, 0). The first double of that stream is
the draw. Nothing is shared between (round, arm) pairs, so which arms a policy
plays never shifts the values any other arm will produce.
"""

import numpy as np

UINT64_MASK = (1 << 64) - 1


def uniform_draw(seed: int, round_index: int, arm: int) -> float:
    """Uniform value in [0, 1) derived from (seed, round, arm)."""
    key = np.array([seed & UINT64_MASK, 0], dtype=np.uint64)
    counter = np.array([round_index & UINT64_MASK, arm & UINT64_MASK, 0, 0], dtype=np.uint64)
    generator = np.random.Generator(np.random.Philox(key=key, counter=counter))
    return float(generator.random())


def replication_seed(seed: int, replication: int) -> int:
    """Seed of replication r is seed XOR r."""
    return (seed ^ replication) & UINT64_MASK
