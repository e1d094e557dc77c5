"""Reproducible random streams.

Replicate i of a run with master seed s draws from a PCG64 generator keyed
by splitmix64(s + GOLDEN * i) mod 2**64, where GOLDEN = 0x9E3779B97F4A7C15.
The mapping is fixed; identical (seed, index) pairs always yield identical
streams, independent of scheduling, so parallel runs reproduce serial ones.
"""

from __future__ import annotations

import numpy as np

_MASK64 = (1 << 64) - 1
GOLDEN = 0x9E3779B97F4A7C15


def splitmix64(z: int) -> int:
    """One splitmix64 finalizer round (a 64-bit bijection)."""
    z = (z + GOLDEN) & _MASK64
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK64
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK64
    return z ^ (z >> 31)


def substream_key(seed: int, index: int) -> int:
    """64-bit key of substream `index` under master `seed`."""
    return splitmix64((seed + GOLDEN * index) & _MASK64)


def substream(seed: int, index: int) -> np.random.Generator:
    """Generator for substream `index`; distinct indices never collide for a
    fixed seed because index -> key is injective mod 2**64."""
    return np.random.Generator(np.random.PCG64(substream_key(seed, index)))
