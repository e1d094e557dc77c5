"""Temporal skeleton of the Kingman coalescent.

Holding times and cumulative branch lengths, mutation counts per level by
the geometric route and by the conditional Poisson route, and the
distribution function built from trimmed harmonic numbers.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .special_functions import floor_power

_HSTAR_MIN_CAP = 1 << 12


@dataclass
class CoalescentPath:
    """Holding times tau_2..tau_n and cumulative lengths L_1..L_n of one
    coalescent realization; L_1 = 0 and L_k = L_{k-1} + k tau_k."""

    n: int
    tau: np.ndarray
    cum_len: np.ndarray

    def __post_init__(self):
        if self.n < 1:
            raise ValueError(f"n must be >= 1, got {self.n}")
        if len(self.tau) != self.n - 1 or len(self.cum_len) != self.n:
            raise ValueError("tau must have length n-1 and cum_len length n")
        if self.cum_len[0] != 0.0:
            raise ValueError("L_1 must be 0")

    @property
    def total_length(self) -> float:
        return float(self.cum_len[-1])


@dataclass
class MutationCounts:
    """Mutation counts M_2..M_n, one per coalescent level."""

    n: int
    counts: np.ndarray

    def __post_init__(self):
        if len(self.counts) != self.n - 1:
            raise ValueError("counts must have length n-1")

    @property
    def total(self) -> int:
        return int(self.counts.sum())


def _open_uniform(rng: np.random.Generator, size: int) -> np.ndarray:
    # uniforms on the open interval (0, 1); rng.random() can return 0.0
    u = rng.random(size)
    mask = u == 0.0
    while mask.any():
        u[mask] = rng.random(int(mask.sum()))
        mask = u == 0.0
    return u


def sample_coalescent_times(n: int, rng: np.random.Generator) -> CoalescentPath:
    """One draw of the holding times: tau_k ~ Exponential(rate k(k-1)/2),
    independent across k, via inverse CDF on the open unit interval."""
    if n < 1:
        raise ValueError(f"n must be >= 1, got {n}")
    if n == 1:
        return CoalescentPath(1, np.empty(0), np.zeros(1))
    k = np.arange(2, n + 1, dtype=np.float64)
    rates = k * (k - 1) / 2.0
    u = _open_uniform(rng, n - 1)
    tau = -np.log1p(-u) / rates
    cum_len = np.empty(n)
    cum_len[0] = 0.0
    np.cumsum(k * tau, out=cum_len[1:])
    return CoalescentPath(n, tau, cum_len)


def sample_mutations_geometric(
    n: int, t1: float, rng: np.random.Generator
) -> MutationCounts:
    """Mutation counts per level drawn directly: M_k geometric on {0, 1, ...}
    with success probability (k-1)/(t1+k-1), via floor(log U / log q)."""
    if n < 1:
        raise ValueError(f"n must be >= 1, got {n}")
    if t1 < 0:
        raise ValueError(f"t1 must be >= 0, got {t1}")
    if n == 1:
        return MutationCounts(1, np.empty(0, dtype=np.int64))
    if t1 == 0.0:
        return MutationCounts(n, np.zeros(n - 1, dtype=np.int64))
    k = np.arange(2, n + 1, dtype=np.float64)
    fail = t1 / (t1 + k - 1.0)
    u = 1.0 - rng.random(n - 1)  # (0, 1]
    counts = np.floor(np.log(u) / np.log(fail)).astype(np.int64)
    return MutationCounts(n, counts)


def sample_mutations_conditional(
    path: CoalescentPath, t1: float, rng: np.random.Generator
) -> MutationCounts:
    """Mutation counts given the holding times: M_k | tau_k is Poisson with
    mean t1 k tau_k / 2, independent across levels."""
    if t1 < 0:
        raise ValueError(f"t1 must be >= 0, got {t1}")
    if path.n == 1:
        return MutationCounts(1, np.empty(0, dtype=np.int64))
    if t1 == 0.0:
        return MutationCounts(path.n, np.zeros(path.n - 1, dtype=np.int64))
    means = t1 * np.diff(path.cum_len) / 2.0
    return MutationCounts(path.n, rng.poisson(means).astype(np.int64))


_hstar_values = np.zeros(2)  # H*_0 = H*_1 = 0


def _hstar(m: int) -> float:
    """H*_m = sum_{k=2}^{m} 1/k, from a grow-on-demand cumulative table."""
    global _hstar_values
    if m >= len(_hstar_values):
        cap = max(_HSTAR_MIN_CAP, 2 * m)
        vals = np.empty(cap + 1)
        vals[0] = vals[1] = 0.0
        np.cumsum(1.0 / np.arange(2, cap + 1, dtype=np.float64), out=vals[2:])
        _hstar_values = vals
    return float(_hstar_values[m])


def compute_F_n(n: int, t: float) -> float:
    """F_n(t) = H*_{floor(n**t) - 1} / log n on [0, 1], with H*_0 = H*_1 = 0."""
    if n < 2:
        raise ValueError(f"n must be >= 2, got {n}")
    if not (0.0 <= t <= 1.0):
        raise ValueError(f"t must lie in [0, 1], got {t}")
    m = floor_power(n, t)
    return _hstar(m - 1) / math.log(n)
