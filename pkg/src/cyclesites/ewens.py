"""Cycle counts of Ewens-distributed random permutations.

Two samplers for the same law (the sequential restaurant construction and
the independent-Bernoulli representation) plus an exact pmf by dynamic
programming, used to pin both samplers down in tests.
"""

from __future__ import annotations

from itertools import permutations
from dataclasses import dataclass

import numpy as np

MAX_EXACT_PMF_N = 30
MAX_BRUTE_FORCE_N = 8


@dataclass(frozen=True)
class CycleCountSample:
    n: int
    t1: float
    k: int

    def __post_init__(self):
        if not (1 <= self.k <= self.n):
            raise ValueError(f"cycle count {self.k} outside [1, {self.n}]")


def sample_crp_cycles(
    n: int, t1: float, rng: np.random.Generator
) -> CycleCountSample:
    """Sequential construction: after j elements are seated, element j+1
    opens a new cycle with probability t1/(t1+j), otherwise joins an existing
    cycle uniformly. Only the count is tracked; joins leave it unchanged."""
    if n < 1:
        raise ValueError(f"n must be >= 1, got {n}")
    if not t1 > 0:
        raise ValueError(f"t1 must be > 0, got {t1}")
    if n == 1:
        return CycleCountSample(1, t1, 1)
    j = np.arange(1, n, dtype=np.float64)
    k = 1 + int(np.count_nonzero(rng.random(n - 1) < t1 / (t1 + j)))
    return CycleCountSample(n, t1, k)


def sample_feller_cycles(
    n: int, t1: float, rng: np.random.Generator
) -> CycleCountSample:
    """Independent-Bernoulli representation: the count is 1 plus a sum of
    independent indicators with success probabilities t1/(t1+k-1), k=2..n."""
    if n < 2:
        raise ValueError(f"n must be >= 2, got {n}")
    if not t1 > 0:
        raise ValueError(f"t1 must be > 0, got {t1}")
    ks = np.arange(2, n + 1, dtype=np.float64)
    k = 1 + int(np.count_nonzero(rng.random(n - 1) < t1 / (t1 + ks - 1.0)))
    return CycleCountSample(n, t1, k)


def exact_cycle_pmf(n: int, t1: float) -> np.ndarray:
    """Exact pmf of the cycle count over k = 1..n (index k-1), by convolving
    the Bernoulli(t1/(t1+k-1)) indicators and shifting by one."""
    if not (1 <= n <= MAX_EXACT_PMF_N):
        raise ValueError(f"n must lie in [1, {MAX_EXACT_PMF_N}], got {n}")
    if not t1 > 0:
        raise ValueError(f"t1 must be > 0, got {t1}")
    pmf = np.zeros(n)
    pmf[0] = 1.0
    for k in range(2, n + 1):
        p = t1 / (t1 + k - 1.0)
        pmf[1:] = pmf[1:] * (1.0 - p) + pmf[:-1] * p
        pmf[0] *= 1.0 - p
    return pmf


def _cycle_count(perm: tuple[int, ...]) -> int:
    seen = [False] * len(perm)
    cycles = 0
    for start in range(len(perm)):
        if seen[start]:
            continue
        cycles += 1
        j = start
        while not seen[j]:
            seen[j] = True
            j = perm[j]
    return cycles


def brute_force_cycle_pmf(n: int, t1: float) -> np.ndarray:
    """Cycle-count pmf by weighting every permutation of [n] with
    t1**cycles / (t1)_n; exhaustive, so capped at n = 8 (40320 permutations)."""
    if not (1 <= n <= MAX_BRUTE_FORCE_N):
        raise ValueError(f"n must lie in [1, {MAX_BRUTE_FORCE_N}], got {n}")
    if not t1 > 0:
        raise ValueError(f"t1 must be > 0, got {t1}")
    weights = np.zeros(n)
    for perm in permutations(range(n)):
        weights[_cycle_count(perm) - 1] += 1.0
    powers = t1 ** np.arange(1, n + 1)
    pmf = weights * powers
    return pmf / pmf.sum()
