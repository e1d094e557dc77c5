"""Empirical moments, cumulants, covariances and goodness-of-fit statistics.

Cumulant estimators are plug-in (biased); their standard errors come from a
fixed-size nonparametric bootstrap driven by a dedicated substream so that
every summary is deterministic given its inputs.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.special import ndtr
from scipy.stats import chi2

MAX_SUMMARY_ORDER = 8
BOOTSTRAP_RESAMPLES = 200
_BOOTSTRAP_SEED = 0x5EEDB00057  # fixed substream for reproducible SEs
_BOOTSTRAP_CHUNK = 50


@dataclass
class SampleSummary:
    count: int
    raw_moments: tuple[float, ...]
    central_moments: tuple[float, ...]
    cumulants: tuple[float, ...]
    se: tuple[float, ...]


@dataclass(frozen=True)
class CovarianceEstimate:
    estimate: float
    se: float


@dataclass(frozen=True)
class ChiSquareResult:
    statistic: float
    dof: int


def moments_to_cumulants(raw: np.ndarray | list[float]) -> list[float]:
    """kappa_r = m_r - sum_{j<r} C(r-1, j-1) kappa_j m_{r-j}, from raw moments."""
    raw = list(raw)
    kappas: list[float] = []
    for r in range(1, len(raw) + 1):
        acc = raw[r - 1]
        for j in range(1, r):
            acc -= math.comb(r - 1, j - 1) * kappas[j - 1] * raw[r - j - 1]
        kappas.append(acc)
    return kappas


def cumulants_to_moments(kappas: list[float]) -> list[float]:
    """Inverse of moments_to_cumulants."""
    raw: list[float] = []
    for r in range(1, len(kappas) + 1):
        acc = kappas[r - 1]
        for j in range(1, r):
            acc += math.comb(r - 1, j - 1) * kappas[j - 1] * raw[r - j - 1]
        raw.append(acc)
    return raw


def _raw_moments(x: np.ndarray, max_order: int) -> np.ndarray:
    out = np.empty(max_order)
    p = np.ones_like(x)
    for r in range(max_order):
        p = p * x
        out[r] = p.mean()
    return out


def summarize(
    samples,
    max_order: int,
    rng: np.random.Generator | None = None,
) -> SampleSummary:
    """Plug-in moments and cumulants up to max_order with standard errors.

    The SE of the mean is the usual sample-sd / sqrt(count); SEs of higher
    cumulants are bootstrap standard deviations over 200 resamples.
    """
    x = np.asarray(samples, dtype=np.float64)
    if x.size == 0:
        raise ValueError("empty sample")
    if not (1 <= max_order <= MAX_SUMMARY_ORDER):
        raise ValueError(
            f"max_order must lie in [1, {MAX_SUMMARY_ORDER}], got {max_order}"
        )
    n = x.size
    raw = _raw_moments(x, max_order)
    centered = x - raw[0]
    central = _raw_moments(centered, max_order)
    central[0] = 0.0
    kappas = moments_to_cumulants(raw)

    se = [float(x.std(ddof=1) / math.sqrt(n)) if n > 1 else 0.0]
    if max_order > 1:
        se.extend(_bootstrap_cumulant_se(x, max_order, rng))
    return SampleSummary(
        count=n,
        raw_moments=tuple(float(v) for v in raw),
        central_moments=tuple(float(v) for v in central),
        cumulants=tuple(float(v) for v in kappas),
        se=tuple(se),
    )


def _bootstrap_rng(rng: np.random.Generator | None) -> np.random.Generator:
    return rng if rng is not None else np.random.default_rng(_BOOTSTRAP_SEED)


def _bootstrap_cumulant_se(
    x: np.ndarray, max_order: int, rng: np.random.Generator | None
) -> list[float]:
    gen = _bootstrap_rng(rng)
    n = x.size
    powers = np.empty((n, max_order))
    p = np.ones_like(x)
    for r in range(max_order):
        p = p * x
        powers[:, r] = p
    boot = np.empty((BOOTSTRAP_RESAMPLES, max_order))
    done = 0
    while done < BOOTSTRAP_RESAMPLES:
        m = min(_BOOTSTRAP_CHUNK, BOOTSTRAP_RESAMPLES - done)
        for b in range(m):
            w = np.bincount(gen.integers(0, n, n), minlength=n).astype(np.float64)
            raw_b = (w @ powers) / n
            boot[done + b] = moments_to_cumulants(raw_b)
        done += m
    return [float(v) for v in boot.std(axis=0, ddof=1)[1:]]


def cross_covariance(
    a, b, rng: np.random.Generator | None = None
) -> CovarianceEstimate:
    """Plug-in covariance of two equal-length samples, bootstrap SE."""
    a = np.asarray(a, dtype=np.float64)
    b = np.asarray(b, dtype=np.float64)
    if a.shape != b.shape or a.ndim != 1:
        raise ValueError("samples must be equal-length vectors")
    n = a.size
    if n < 2:
        raise ValueError("need at least two observations")
    est = float(a @ b / n - a.mean() * b.mean())
    gen = _bootstrap_rng(rng)
    boot = np.empty(BOOTSTRAP_RESAMPLES)
    for r in range(BOOTSTRAP_RESAMPLES):
        w = np.bincount(gen.integers(0, n, n), minlength=n).astype(np.float64)
        ma = w @ a / n
        mb = w @ b / n
        boot[r] = w @ (a * b) / n - ma * mb
    return CovarianceEstimate(est, float(boot.std(ddof=1)))


def ks_statistic(samples, cdf: str = "standard_normal") -> float:
    """Sup distance between the empirical CDF and the standard normal CDF,
    evaluated at the order statistics."""
    if cdf not in ("standard_normal", "standard-normal"):
        raise ValueError(f"unsupported reference cdf {cdf!r}")
    x = np.sort(np.asarray(samples, dtype=np.float64))
    m = x.size
    if m == 0:
        raise ValueError("empty sample")
    phi = ndtr(x)
    i = np.arange(1, m + 1)
    return float(max(np.max(phi - (i - 1) / m), np.max(i / m - phi)))


def _pool_bins(combined: np.ndarray, min_expected: float = 5.0) -> list[slice]:
    """Greedy left-to-right pooling of adjacent bins until each group's
    combined count reaches the floor; a light trailing group is merged back."""
    groups: list[slice] = []
    start = 0
    acc = 0.0
    for i, c in enumerate(combined):
        acc += c
        if acc >= min_expected:
            groups.append(slice(start, i + 1))
            start = i + 1
            acc = 0.0
    if start < len(combined):
        if groups:
            last = groups.pop()
            groups.append(slice(last.start, len(combined)))
        else:
            groups.append(slice(0, len(combined)))
    return groups


def chi_square_two_sample(hist_a, hist_b) -> ChiSquareResult:
    """Two-sample chi-square statistic over a shared bin layout, with bins
    pooled until every group holds a combined count of at least 5."""
    a = np.asarray(hist_a, dtype=np.float64)
    b = np.asarray(hist_b, dtype=np.float64)
    if a.shape != b.shape or a.ndim != 1:
        raise ValueError("histograms must share one bin layout")
    na, nb = a.sum(), b.sum()
    if na == 0 or nb == 0:
        raise ValueError("histograms must be nonempty")
    groups = _pool_bins(a + b)
    stat = 0.0
    used = 0
    for g in groups:
        ga, gb = a[g].sum(), b[g].sum()
        total = ga + gb
        if total == 0:
            continue
        ea = na * total / (na + nb)
        eb = nb * total / (na + nb)
        stat += (ga - ea) ** 2 / ea + (gb - eb) ** 2 / eb
        used += 1
    return ChiSquareResult(float(stat), max(used - 1, 1))


def chi_square_gof(observed, probs) -> ChiSquareResult:
    """One-sample chi-square of observed counts against exact cell
    probabilities, pooling cells whose expected count falls below 5."""
    obs = np.asarray(observed, dtype=np.float64)
    p = np.asarray(probs, dtype=np.float64)
    if obs.shape != p.shape or obs.ndim != 1:
        raise ValueError("counts and probabilities must align")
    n = obs.sum()
    if n == 0:
        raise ValueError("observed histogram is empty")
    groups = _pool_bins(n * p)
    stat = 0.0
    used = 0
    for g in groups:
        e = n * p[g].sum()
        if e == 0:
            continue
        stat += (obs[g].sum() - e) ** 2 / e
        used += 1
    return ChiSquareResult(float(stat), max(used - 1, 1))


def chi_square_critical(dof: int, level: float = 0.001) -> float:
    """Upper critical value of the chi-square distribution."""
    return float(chi2.isf(level, dof))
