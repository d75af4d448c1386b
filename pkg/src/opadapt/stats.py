"""Statistical tests used to compare EA designs.

Mann-Whitney confidences use the mid-p convention,
``p = P(U > u) + P(U = u) / 2``, which makes ``confidence(a, b)`` and
``confidence(b, a)`` sum to exactly one and gives 0.5 for identical samples.
"""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Mapping, Sequence

import numpy as np
from scipy import special

EXACT_MAX_TOTAL = 12


@dataclass(frozen=True)
class ComparisonResult:
    confidence: float
    p_value: float
    u_statistic: float
    method: str  # "exact" or "normal"


@dataclass(frozen=True)
class PairedTResult:
    t: float
    p_value: float
    n: int


@dataclass(frozen=True)
class AnovaResult:
    F: float
    p_value: float
    df_between: int
    df_within: int
    ss_between: float
    ss_within: float


def midranks(values: Sequence[float]) -> list[float]:
    """1-based ranks with ties sharing the average of their positions."""
    order = sorted(range(len(values)), key=lambda i: values[i])
    ranks = [0.0] * len(values)
    i = 0
    while i < len(order):
        j = i
        while j + 1 < len(order) and values[order[j + 1]] == values[order[i]]:
            j += 1
        r = (i + j) / 2.0 + 1.0
        for k in range(i, j + 1):
            ranks[order[k]] = r
        i = j + 1
    return ranks


def u_statistic(a: Sequence[float], b: Sequence[float]) -> float:
    ranks = midranks(list(a) + list(b))
    na = len(a)
    return sum(ranks[:na]) - na * (na + 1) / 2.0


@lru_cache(maxsize=4096)
def _exact_u_counts(doubled_ranks: tuple[int, ...], na: int) -> dict[int, int]:
    # keys are 2*U so tied midranks stay integral
    counts: dict[int, int] = {}
    offset = na * (na + 1)
    for combo in itertools.combinations(doubled_ranks, na):
        key = sum(combo) - offset
        counts[key] = counts.get(key, 0) + 1
    return counts


def _split(small: float, small_is_p: bool) -> tuple[float, float]:
    # the smaller tail is computed directly and the larger one as its
    # complement, so swapping the samples gives confidences summing to exactly 1
    return (small, 1.0 - small) if small_is_p else (1.0 - small, small)


def _exact_p(a, b) -> tuple[float, float, float]:
    ranks = midranks(list(a) + list(b))
    na = len(a)
    doubled = tuple(sorted(int(round(2 * r)) for r in ranks))
    u2 = int(round(2 * sum(ranks[:na]))) - na * (na + 1)
    counts = _exact_u_counts(doubled, na)
    total = sum(counts.values())
    above = sum(c for k, c in counts.items() if k > u2)
    tie = counts.get(u2, 0)
    p_num = 2 * above + tie  # p = p_num / (2 total)
    c_num = 2 * total - p_num
    if p_num <= c_num:
        p, conf = _split(p_num / (2 * total), True)
    else:
        p, conf = _split(c_num / (2 * total), False)
    return p, conf, u2 / 2.0


def _normal_p(a, b) -> tuple[float, float, float]:
    na, nb = len(a), len(b)
    n = na + nb
    ranks = midranks(list(a) + list(b))
    u = sum(ranks[:na]) - na * (na + 1) / 2.0
    _, tie_sizes = np.unique(np.concatenate([np.asarray(a, float), np.asarray(b, float)]),
                             return_counts=True)
    tie_term = float(np.sum(tie_sizes.astype(float) ** 3 - tie_sizes))
    var = na * nb / 12.0 * ((n + 1) - tie_term / (n * (n - 1)))
    if var <= 0.0:
        return 0.5, 0.5, u
    z = (u - na * nb / 2.0) / math.sqrt(var)
    tail = 0.5 * math.erfc(abs(z) / math.sqrt(2.0))
    return (*_split(tail, z >= 0.0), u)


def mann_whitney_confidence(a: Sequence[float], b: Sequence[float],
                            method: str | None = None) -> ComparisonResult:
    """Confidence that ``a`` is stochastically greater than ``b``.

    Exact null enumeration is used when the pooled size is at most 12,
    otherwise a tie-corrected normal approximation; ``method`` forces one.
    """
    if len(a) == 0 or len(b) == 0:
        raise ValueError("both samples must be non-empty")
    if method is None:
        method = "exact" if len(a) + len(b) <= EXACT_MAX_TOTAL else "normal"
    if method == "exact":
        p, conf, u = _exact_p(a, b)
    elif method == "normal":
        p, conf, u = _normal_p(a, b)
    else:
        raise ValueError(f"unknown method {method!r}")
    return ComparisonResult(conf, p, u, method)


def mean_confidence(design_samples: Mapping[str, Sequence[float]], target: str) -> float:
    """Average confidence that ``target`` beats each of the other designs."""
    rivals = [d for d in design_samples if d != target]
    if target not in design_samples or not rivals:
        raise ValueError("need the target design and at least one rival")
    sample = design_samples[target]
    return math.fsum(
        mann_whitney_confidence(sample, design_samples[r]).confidence for r in rivals
    ) / len(rivals)


def pearson_correlation(x: Sequence[float], y: Sequence[float]) -> float:
    """Sample correlation; NaN when either input has zero variance."""
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    if x.shape != y.shape or x.size < 2:
        raise ValueError("need two equal-length sequences of at least 2 values")
    dx = x - x.mean()
    dy = y - y.mean()
    sxx = float(dx @ dx)
    syy = float(dy @ dy)
    if sxx == 0.0 or syy == 0.0:
        return math.nan
    r = float(dx @ dy) / math.sqrt(sxx * syy)
    return min(max(r, -1.0), 1.0)


def student_t_sf(t: float, df: float) -> float:
    """P(T > t) for Student's t with ``df`` degrees of freedom."""
    return float(special.stdtr(df, -t))


def f_sf(f: float, df1: float, df2: float) -> float:
    """P(F > f) for the F distribution."""
    return float(special.fdtrc(df1, df2, f))


def paired_t(a: Sequence[float], b: Sequence[float]) -> PairedTResult:
    """One-sided paired t-test of mean(a - b) > 0."""
    d = np.asarray(a, dtype=float) - np.asarray(b, dtype=float)
    n = d.size
    if len(a) != len(b) or n < 2:
        raise ValueError("need paired samples of equal length >= 2")
    mean = float(d.mean())
    sd = float(d.std(ddof=1))
    if sd == 0.0:
        if mean == 0.0:
            return PairedTResult(0.0, 0.5, n)
        return PairedTResult(math.copysign(math.inf, mean), 0.0 if mean > 0 else 1.0, n)
    t = mean / (sd / math.sqrt(n))
    return PairedTResult(t, student_t_sf(t, n - 1), n)


def anova_f(groups: Sequence[Sequence[float]]) -> AnovaResult:
    """One-way ANOVA F-test."""
    groups = [np.asarray(g, dtype=float) for g in groups]
    k = len(groups)
    n = sum(g.size for g in groups)
    if k < 2 or any(g.size == 0 for g in groups) or n <= k:
        raise ValueError("need >= 2 non-empty groups and more values than groups")
    grand = float(np.concatenate(groups).mean())
    ss_b = math.fsum(g.size * (float(g.mean()) - grand) ** 2 for g in groups)
    ss_w = math.fsum(float(np.sum((g - g.mean()) ** 2)) for g in groups)
    df_b, df_w = k - 1, n - k
    if ss_w == 0.0:
        if ss_b == 0.0:
            return AnovaResult(math.nan, math.nan, df_b, df_w, ss_b, ss_w)
        return AnovaResult(math.inf, 0.0, df_b, df_w, ss_b, ss_w)
    F = (ss_b / df_b) / (ss_w / df_w)
    return AnovaResult(F, f_sf(F, df_b, df_w), df_b, df_w, ss_b, ss_w)
