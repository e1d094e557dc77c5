"""Exact cumulant engine.

Closed-form cumulants of the negative binomial law, of the total number of
segregating sites, and of the coalescent tree length, each with an
independent second route: the negative binomial via the law of total
cumulance over the set-partition lattice, the sites cumulants via a per-term
polylogarithm sum, and the tree length via its zeta limit.
"""

from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass, field
from typing import Iterator

import numpy as np

from .special_functions import (
    HarmonicSpec,
    harmonic,
    harmonic_number,
    polylog_neg,
    polylog_neg_array,
    stirling2,
    zeta_partial,
)

MAX_PARTITION_GROUND = 12

_SITES_CHUNK = 1 << 18


@dataclass(frozen=True)
class SetPartition:
    """A partition of {1, ..., d} into disjoint nonempty blocks."""

    ground_size: int
    blocks: tuple[frozenset[int], ...]

    def __post_init__(self):
        if self.ground_size < 1:
            raise ValueError("ground_size must be >= 1")
        seen: set[int] = set()
        for block in self.blocks:
            if not block:
                raise ValueError("empty block")
            if seen & block:
                raise ValueError("blocks overlap")
            seen |= block
        if seen != set(range(1, self.ground_size + 1)):
            raise ValueError("blocks do not cover the ground set")


@dataclass(frozen=True)
class NegBinomialParams:
    a: float
    p: float

    def __post_init__(self):
        if not self.a > 0:
            raise ValueError(f"shape a must be > 0, got {self.a}")
        if not (0.0 <= self.p < 1.0):
            raise ValueError(f"p must lie in [0, 1), got {self.p}")


@dataclass
class CumulantTable:
    """Cumulants kappa_1..kappa_max of one law, with its parameters."""

    subject: str
    params: dict
    values: tuple[float, ...] = field(default_factory=tuple)

    def __post_init__(self):
        if self.subject not in ("neg_binomial", "sites", "tree_length"):
            raise ValueError(f"unknown subject {self.subject!r}")
        if len(self.values) >= 2 and self.values[1] < 0:
            raise ValueError("second cumulant (a variance) cannot be negative")


def enumerate_set_partitions(d: int) -> Iterator[SetPartition]:
    """All partitions of {1, ..., d}, each exactly once (Bell(d) of them).

    Enumerated lazily through restricted growth strings; d is capped so a
    full sweep stays affordable (Bell(12) = 4,213,597).
    """
    if not (1 <= d <= MAX_PARTITION_GROUND):
        raise ValueError(f"d must lie in [1, {MAX_PARTITION_GROUND}], got {d}")

    labels = [0] * d

    def rec(i: int, next_label: int) -> Iterator[SetPartition]:
        if i == d:
            groups: dict[int, list[int]] = {}
            for elem, lab in enumerate(labels, start=1):
                groups.setdefault(lab, []).append(elem)
            yield SetPartition(
                d, tuple(frozenset(groups[lab]) for lab in sorted(groups))
            )
            return
        for lab in range(next_label + 1):
            labels[i] = lab
            yield from rec(i + 1, max(next_label, lab + 1))

    yield from rec(0, 0)


def neg_binomial_cumulant(i: int, params: NegBinomialParams) -> float:
    """i-th cumulant of the negative binomial law: a * Li_{1-i}(p)."""
    if i < 1:
        raise ValueError(f"order must be >= 1, got {i}")
    return params.a * polylog_neg(i - 1, params.p)


def neg_binomial_cumulant_via_total_cumulance(
    i: int, params: NegBinomialParams
) -> float:
    """Same cumulant through the gamma-Poisson mixture and the law of total
    cumulance, as an independent oracle.

    With T ~ Gamma(shape a, rate beta) and X | T ~ Poisson(T), every
    conditional cumulant of X equals T, so the total-cumulance expansion over
    set partitions of [i] collapses blockwise to cumulants of T:

        kappa_i(X) = sum over partitions pi of kappa_{|pi|}(T)
                   = a * sum_b N_b (b-1)! / beta**b,

    where N_b counts the enumerated partitions with b blocks. Matching the
    negative binomial pmf forces beta = (1-p)/p.
    """
    if not (1 <= i <= MAX_PARTITION_GROUND):
        raise ValueError(f"order must lie in [1, {MAX_PARTITION_GROUND}], got {i}")
    if params.p == 0.0:
        return 0.0
    block_counts = Counter(
        len(part.blocks) for part in enumerate_set_partitions(i)
    )
    beta = (1.0 - params.p) / params.p
    return params.a * math.fsum(
        count * math.factorial(b - 1) / beta**b
        for b, count in sorted(block_counts.items())
    )


def sites_cumulant(i: int, n: int, t1: float) -> float:
    """i-th cumulant of the total number of segregating sites in a sample of
    size n at mutation parameter t1:

        sum_{b=1}^{i} S(i, b) (b-1)! t1**b H_{n-1}^{(b)}.
    """
    if i < 1:
        raise ValueError(f"order must be >= 1, got {i}")
    if n < 1:
        raise ValueError(f"sample size must be >= 1, got {n}")
    if t1 < 0:
        raise ValueError(f"t1 must be >= 0, got {t1}")
    if n == 1 or t1 == 0.0:
        return 0.0
    return math.fsum(
        stirling2(i, b)
        * math.factorial(b - 1)
        * t1**b
        * harmonic(HarmonicSpec(1, n - 1, b))
        for b in range(1, i + 1)
    )


def sites_cumulant_polylog(i: int, n: int, t1: float) -> float:
    """Alternate route to the same cumulant: sum_{k=1}^{n-1} Li_{1-i}(t1/(k+t1)),
    one polylogarithm per coalescent level."""
    if i < 1:
        raise ValueError(f"order must be >= 1, got {i}")
    if n < 1:
        raise ValueError(f"sample size must be >= 1, got {n}")
    if t1 < 0:
        raise ValueError(f"t1 must be >= 0, got {t1}")
    if n == 1 or t1 == 0.0:
        return 0.0
    parts = []
    for lo in range(1, n, _SITES_CHUNK):
        hi = min(lo + _SITES_CHUNK - 1, n - 1)
        k = np.arange(lo, hi + 1, dtype=np.float64)
        u = t1 / (k + t1)
        parts.append(float(np.sum(polylog_neg_array(i - 1, u))))
    return math.fsum(parts)


def tree_length_cumulant(j: int, n: int) -> float:
    """j-th cumulant of the total coalescent tree length:
    (j-1)! 2**j sum_{k=2}^{n} (k-1)**-j."""
    if j < 1:
        raise ValueError(f"order must be >= 1, got {j}")
    if n < 2:
        raise ValueError(f"sample size must be >= 2, got {n}")
    return math.factorial(j - 1) * 2.0**j * harmonic(HarmonicSpec(1, n - 1, j))


def tree_length_cumulant_limit(j: int, tol: float = 1e-12) -> float:
    """Large-n limit of tree_length_cumulant: (j-1)! 2**j zeta(j), j >= 2."""
    if j < 2:
        raise ValueError(f"limit exists for j >= 2 only, got {j}")
    return math.factorial(j - 1) * 2.0**j * zeta_partial(j, tol)


def scaled_sites_cumulant(j: int, n: int, t1: float) -> float:
    """j-th cumulant of S(n) / (t1/2); converges to tree_length_cumulant(j, n)
    as t1 grows."""
    if t1 <= 0:
        raise ValueError(f"t1 must be > 0 for the scaled cumulant, got {t1}")
    return (2.0 / t1) ** j * sites_cumulant(j, n, t1)


def sites_cumulant_table(n: int, t1: float, max_order: int) -> CumulantTable:
    values = tuple(sites_cumulant(i, n, t1) for i in range(1, max_order + 1))
    return CumulantTable("sites", {"n": n, "t1": t1}, values)


def tree_length_cumulant_table(n: int, max_order: int) -> CumulantTable:
    values = tuple(tree_length_cumulant(j, n) for j in range(1, max_order + 1))
    return CumulantTable("tree_length", {"n": n}, values)


def neg_binomial_cumulant_table(
    params: NegBinomialParams, max_order: int
) -> CumulantTable:
    values = tuple(
        neg_binomial_cumulant(i, params) for i in range(1, max_order + 1)
    )
    return CumulantTable(
        "neg_binomial", {"a": params.a, "p": params.p}, values
    )
