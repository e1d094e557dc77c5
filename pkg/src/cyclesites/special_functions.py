"""Exact combinatorics and the special-function evaluations behind every
closed-form cumulant: Stirling numbers of the second kind, trimmed harmonic
numbers, the polylogarithm of nonpositive integer order, rising factorials,
and a partial-sum zeta evaluator.

All Stirling arithmetic is done in exact Python integers; floating point
enters only when a value is handed back to the caller.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

import mpmath
import numpy as np

DEFAULT_STIRLING_MAX = 64

_HARMONIC_CHUNK = 1 << 20


class StirlingCache:
    """Triangular table of Stirling numbers of the second kind.

    Entries are exact Python integers (arbitrary precision), built once via
    the recurrence S(n+1, k) = S(n, k-1) + k*S(n, k). Immutable after
    construction, so instances are safe to share across threads.
    """

    def __init__(self, max_n: int = DEFAULT_STIRLING_MAX):
        if max_n < 0:
            raise ValueError(f"max_n must be nonnegative, got {max_n}")
        self.max_n = max_n
        table = [[1]]
        for n in range(1, max_n + 1):
            prev = table[-1]
            row = [0] * (n + 1)
            row[n] = 1
            for k in range(1, n):
                row[k] = prev[k - 1] + k * prev[k]
            table.append(row)
        self.table = table

    def get(self, n: int, k: int) -> int:
        if not (0 <= n <= self.max_n) or not (0 <= k <= self.max_n):
            raise ValueError(
                f"stirling2({n}, {k}) outside cached range [0, {self.max_n}]"
            )
        if k > n:
            return 0
        return self.table[n][k]


_default_cache = StirlingCache()


def stirling2(n: int, k: int, cache: StirlingCache | None = None) -> int:
    """Number of partitions of an n-set into k nonempty blocks, exactly."""
    return (cache or _default_cache).get(n, k)


@dataclass(frozen=True)
class HarmonicSpec:
    """Sum range and order for a trimmed harmonic number: sum of k**-b
    over m <= k <= n."""

    m: int
    n: int
    b: int = 1

    def __post_init__(self):
        if self.m < 1:
            raise ValueError(f"m must be >= 1, got {self.m}")
        if self.n < self.m:
            raise ValueError(f"need m <= n, got m={self.m}, n={self.n}")
        if self.b < 1:
            raise ValueError(f"order b must be >= 1, got {self.b}")


@lru_cache(maxsize=4096)
def _harmonic(m: int, n: int, b: int) -> float:
    # Ascending k, chunked; math.fsum is compensated (error-free) per chunk.
    parts = []
    for lo in range(m, n + 1, _HARMONIC_CHUNK):
        hi = min(lo + _HARMONIC_CHUNK - 1, n)
        k = np.arange(lo, hi + 1, dtype=np.float64)
        parts.append(math.fsum(1.0 / k**b))
    return math.fsum(parts)


def harmonic(spec: HarmonicSpec) -> float:
    """Trimmed harmonic number sum(k**-b, k=m..n) by compensated summation."""
    return _harmonic(spec.m, spec.n, spec.b)


def harmonic_number(n: int, b: int = 1) -> float:
    """Generalized harmonic number H_n^{(b)}; empty sum (n = 0) is 0."""
    if n == 0:
        return 0.0
    return _harmonic(1, n, b)


@lru_cache(maxsize=256)
def _polylog_coeffs(order_m: int, max_n: int) -> tuple[float, ...]:
    # c_k = k! * S(m+1, k+1), k = 0..m; exact integers, rounded once to float
    fact = 1
    out = []
    for k in range(order_m + 1):
        if k > 0:
            fact *= k
        out.append(float(fact * _default_cache.get(order_m + 1, k + 1)))
    return tuple(out)


def _check_polylog_args(order_m: int, u: float) -> None:
    if order_m < 0:
        raise ValueError(f"order must be >= 0, got {order_m}")
    if order_m + 1 > _default_cache.max_n:
        raise ValueError(
            f"order {order_m} exceeds Stirling cache range {_default_cache.max_n}"
        )
    if not (0.0 <= u < 1.0):
        raise ValueError(f"argument must lie in [0, 1), got {u}")


def polylog_neg(order_m: int, u: float) -> float:
    """Li_{-m}(u) for integer m >= 0 via the closed Stirling form

        Li_{-m}(u) = sum_{k=0}^{m} k! S(m+1, k+1) (u/(1-u))**(k+1).

    Exact up to rounding; the defining series lives in polylog_neg_series
    as an independent check.
    """
    _check_polylog_args(order_m, u)
    if u == 0.0:
        return 0.0
    r = u / (1.0 - u)
    coeffs = _polylog_coeffs(order_m, _default_cache.max_n)
    # Horner in r, then one final multiply by r for the common (k+1) power
    acc = 0.0
    for c in reversed(coeffs):
        acc = acc * r + c
    return acc * r


def polylog_neg_array(order_m: int, u: np.ndarray) -> np.ndarray:
    """Vectorized closed Stirling form of Li_{-m} over an array of arguments."""
    u = np.asarray(u, dtype=np.float64)
    if u.size and (u.min() < 0.0 or u.max() >= 1.0):
        raise ValueError("arguments must lie in [0, 1)")
    if order_m < 0 or order_m + 1 > _default_cache.max_n:
        raise ValueError(f"order {order_m} out of range")
    r = u / (1.0 - u)
    coeffs = _polylog_coeffs(order_m, _default_cache.max_n)
    acc = np.zeros_like(r)
    for c in reversed(coeffs):
        acc = acc * r + c
    return acc * r


def polylog_neg_series(
    order_m: int, u: float, tol: float, max_terms: int = 10**7
) -> float:
    """Li_{-m}(u) by partial sums of the defining series sum_l l**m u**l.

    Stops once a geometric majorant of the tail drops below tol. Purely a
    validation oracle; polylog_neg is the production route.
    """
    _check_polylog_args(order_m, u)
    if tol <= 0:
        raise ValueError(f"tol must be positive, got {tol}")
    if u == 0.0:
        return 0.0
    terms = []
    l = 1
    while l <= max_terms:
        term = float(l) ** order_m * u**l
        terms.append(term)
        # ratio of consecutive terms decreases in l, so once it is < 1 the
        # tail is bounded by the geometric series term * q / (1 - q)
        q = u * ((l + 1) / l) ** order_m
        if q < 1.0 and term * q / (1.0 - q) < tol:
            return math.fsum(terms)
        l += 1
    raise RuntimeError(
        f"series for Li_{-order_m}({u}) did not converge in {max_terms} terms"
    )


def rising_factorial(x: float, n: int) -> float:
    """x (x+1) ... (x+n-1); the empty product (n = 0) is 1."""
    if n < 0:
        raise ValueError(f"n must be >= 0, got {n}")
    out = 1.0
    for j in range(n):
        out *= x + j
    return out


def zeta_partial(j: int, tol: float) -> float:
    """zeta(j) for integer j >= 2 by partial sums with an integral tail bracket.

    The tail sum_{k>N} k**-j lies between the integrals over [N+1, inf) and
    [N, inf); the midpoint of the bracket is added once its half-width is
    below tol, which bounds the total error by tol.
    """
    if j < 2:
        raise ValueError(f"zeta_partial needs j >= 2, got {j}")
    if tol <= 0:
        raise ValueError(f"tol must be positive, got {tol}")
    terms = []
    k = 1
    while True:
        terms.append(float(k) ** -j)
        upper = float(k) ** (1 - j) / (j - 1)
        lower = float(k + 1) ** (1 - j) / (j - 1)
        if (upper - lower) / 2.0 < tol:
            return math.fsum(terms) + (upper + lower) / 2.0
        k += 1


@lru_cache(maxsize=65536)
def floor_power(n: int, t: float) -> int:
    """floor(n**t) for integer n >= 1 and t in [0, 1], robust at boundaries.

    A float candidate from exp(t log n) is corrected by +-1 using an exact
    integer comparison m**q <= n**p when t = p/q has a small binary
    denominator (covers grid values like quarters), and a 60-digit mpmath
    comparison otherwise. Deterministic for repeated calls.
    """
    if n < 1:
        raise ValueError(f"n must be >= 1, got {n}")
    if t < 0.0 or t > 1.0:
        raise ValueError(f"t must lie in [0, 1], got {t}")
    if t == 0.0:
        return 1
    if t == 1.0:
        return int(n)
    num, den = Fraction(t).as_integer_ratio()
    if den <= 128 and num * max(1, int(n).bit_length()) <= 4096:
        m = max(1, int(math.exp(t * math.log(n))))
        while (m + 1) ** den <= n**num:
            m += 1
        while m > 1 and m**den > n**num:
            m -= 1
        return m
    with mpmath.workdps(60):
        return int(mpmath.floor(mpmath.power(n, mpmath.mpf(t))))
