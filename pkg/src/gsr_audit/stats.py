"""Correlations, permutation tests, and the paired t-test."""

from __future__ import annotations

from dataclasses import dataclass
from math import comb, sqrt

import numpy as np
from scipy import special

EXACT_PERMUTATION_LIMIT = 20_000_000
_TINY = 5e-324  # smallest positive float; keeps p-values in (0, 1]


class StatError(ValueError):
    pass


def _t_sf(t: float, df: int) -> float:
    """One-sided upper tail of Student's t (incomplete-beta evaluation)."""
    if not np.isfinite(t):
        return 0.0 if t > 0 else 1.0
    x = df / (df + t * t)
    p = 0.5 * special.betainc(df / 2.0, 0.5, x)
    return p if t >= 0 else 1.0 - p


def pearson(x, y) -> tuple[float, float]:
    """Product-moment r with a two-sided t-transform p-value (n-2 df)."""
    x = np.asarray(x, dtype=np.float64)
    y = np.asarray(y, dtype=np.float64)
    if x.shape != y.shape or x.ndim != 1:
        raise StatError("x and y must be 1-d and equally long")
    n = len(x)
    if n < 3:
        raise StatError("need at least 3 observations")
    xd, yd = x - x.mean(), y - y.mean()
    sx = sqrt(float(xd @ xd))
    sy = sqrt(float(yd @ yd))
    if sx == 0.0 or sy == 0.0:
        raise StatError("degenerate variance")
    r = float(xd @ yd) / (sx * sy)
    r = max(-1.0, min(1.0, r))
    if abs(r) == 1.0:
        return r, _TINY
    t = r * sqrt((n - 2) / (1.0 - r * r))
    p = 2.0 * _t_sf(abs(t), n - 2)
    return r, max(min(p, 1.0), _TINY)


def _midranks(v: np.ndarray) -> np.ndarray:
    order = np.argsort(v, kind="stable")
    ranks = np.empty(len(v), dtype=np.float64)
    i = 0
    sorted_v = v[order]
    while i < len(v):
        j = i
        while j + 1 < len(v) and sorted_v[j + 1] == sorted_v[i]:
            j += 1
        ranks[order[i : j + 1]] = (i + j) / 2.0 + 1.0
        i = j + 1
    return ranks


def spearman(x, y) -> tuple[float, float]:
    """Pearson correlation of mid-rank transforms."""
    x = np.asarray(x, dtype=np.float64)
    y = np.asarray(y, dtype=np.float64)
    if x.shape != y.shape or x.ndim != 1:
        raise StatError("x and y must be 1-d and equally long")
    return pearson(_midranks(x), _midranks(y))


def _subset_sums(values: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """All-subset sums and sizes of a value list (2^n entries)."""
    n = len(values)
    sums = np.zeros(1 << n, dtype=np.float64)
    sizes = np.zeros(1 << n, dtype=np.int64)
    for j, v in enumerate(values):
        lo = 1 << j
        sums[lo : lo << 1] = sums[:lo] + v
        sizes[lo : lo << 1] = sizes[:lo] + 1
    return sums, sizes


def _exact_count_ge(pool: np.ndarray, na: int, threshold: float) -> tuple[int, int]:
    """(subsets of size na with sum >= threshold, total subsets of size na).

    Meet-in-the-middle over the two halves of the pool.
    """
    h = len(pool) // 2
    sums_a, sizes_a = _subset_sums(pool[:h])
    sums_b, sizes_b = _subset_sums(pool[h:])
    by_size_b: dict[int, np.ndarray] = {}
    for s in range(min(na, len(pool) - h) + 1):
        by_size_b[s] = np.sort(sums_b[sizes_b == s])
    hits = 0
    for ka in range(min(na, h) + 1):
        kb = na - ka
        if kb not in by_size_b:
            continue
        b_sorted = by_size_b[kb]
        if len(b_sorted) == 0:
            continue
        needed = threshold - sums_a[sizes_a == ka]
        hits += int((len(b_sorted) - np.searchsorted(b_sorted, needed, "left")).sum())
    return hits, comb(len(pool), na)


def permutation_test_one_tailed(
    group_a,
    group_b,
    trials: int = 1_000_000,
    seed: int = 0,
    force_monte_carlo: bool = False,
) -> float:
    """p for the hypothesis that group_a has the higher mean (one-tailed).

    Exact enumeration when the label-assignment count is at most 2x10^7;
    Monte Carlo otherwise, with p = (hits + 1)/(trials + 1) so p > 0.
    """
    a = np.asarray(group_a, dtype=np.float64)
    b = np.asarray(group_b, dtype=np.float64)
    if len(a) == 0 or len(b) == 0:
        raise StatError("both groups must be non-empty")
    pool = np.concatenate([a, b])
    na, n = len(a), len(pool)
    observed_sum = float(a.sum())
    tol = 1e-9 * max(1.0, float(np.max(np.abs(pool))))
    # mean(a) - mean(b) is monotone in sum(a) at fixed sizes
    threshold = observed_sum - tol
    if not force_monte_carlo and comb(n, na) <= EXACT_PERMUTATION_LIMIT:
        hits, total = _exact_count_ge(pool, na, threshold)
        return hits / total
    rng = np.random.default_rng(seed)
    hits = 0
    remaining = int(trials)
    while remaining > 0:
        chunk = min(remaining, 100_000)
        perms = rng.permuted(np.tile(pool, (chunk, 1)), axis=1)
        hits += int(np.count_nonzero(perms[:, :na].sum(axis=1) >= threshold))
        remaining -= chunk
    return (hits + 1) / (trials + 1)


@dataclass(frozen=True)
class PairedTResult:
    t: float
    p: float
    significant_05: bool
    significant_01: bool


def paired_t_test(before, after) -> PairedTResult:
    """Two-sided paired Student's t on the per-item differences (n-1 df)."""
    before = np.asarray(before, dtype=np.float64)
    after = np.asarray(after, dtype=np.float64)
    if before.shape != after.shape or before.ndim != 1:
        raise StatError("paired samples must be 1-d and equally long")
    n = len(before)
    if n < 2:
        raise StatError("need at least 2 pairs")
    d = after - before
    sd = float(d.std(ddof=1))
    if sd == 0.0:
        raise StatError("zero-variance differences")
    t = float(d.mean()) / (sd / sqrt(n))
    p = max(min(2.0 * _t_sf(abs(t), n - 1), 1.0), _TINY)
    return PairedTResult(t, p, p < 0.05, p < 0.01)
