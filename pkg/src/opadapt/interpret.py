"""Turning an operator's measurement sample into a score.

``interpret_average`` is the plain mean.  ``interpret_outlier`` rewards
operators whose measurements are surprisingly large relative to the pooled
distribution of every operator's measurements: each value x gets the
probability that n draws from the pooled distribution would contain nothing
at least as large, ``(1 - P(Z > z))**n``, and the operator's score is the sum
of those probabilities.
"""
from __future__ import annotations

import logging
import math
from dataclasses import dataclass
from enum import Enum
from typing import Iterable, Mapping, Sequence

log = logging.getLogger(__name__)

NO_DATA = None


class Family(str, Enum):
    NORMAL = "normal"
    LOGNORMAL = "lognormal"


class DegenerateDistribution(ValueError):
    """Pooled measurements have zero spread."""


@dataclass(frozen=True)
class PooledDistribution:
    mu: float
    s: float
    count: int
    family: Family = Family.NORMAL

    @property
    def degenerate(self) -> bool:
        return not self.s > 0.0


@dataclass(frozen=True)
class OutlierScore:
    operator_id: int
    score: float
    n: int


def interpret_average(sample: Sequence[float]):
    """Mean of the sample, or ``NO_DATA`` when it is empty."""
    if len(sample) == 0:
        return NO_DATA
    # centring on the first value keeps a constant sample's mean exact
    ref = sample[0]
    return ref + math.fsum(x - ref for x in sample) / len(sample)


def _transform(x: float, family: Family) -> float:
    if family is Family.LOGNORMAL:
        if x <= 0:
            raise ValueError("log-normal pooling needs strictly positive measurements")
        return math.log(x)
    return x


def pool(samples: Mapping[int, Sequence[float]] | Iterable[Sequence[float]],
         family: Family | str = Family.NORMAL) -> PooledDistribution:
    """Mean and sample standard deviation of all operators' values together."""
    family = Family(family)
    groups = samples.values() if isinstance(samples, Mapping) else samples
    xs = [_transform(x, family) for g in groups for x in g]
    n = len(xs)
    if n < 2 or len(set(xs)) < 2:
        mu = math.fsum(xs) / n if n else 0.0
        return PooledDistribution(mu, 0.0, n, family)
    mu = math.fsum(xs) / n
    var = math.fsum((x - mu) ** 2 for x in xs) / (n - 1)
    return PooledDistribution(mu, math.sqrt(var), n, family)


def z_score(x: float, pooled: PooledDistribution) -> float:
    if pooled.degenerate:
        raise DegenerateDistribution("pooled standard deviation is zero")
    return (_transform(x, pooled.family) - pooled.mu) / pooled.s


def upper_tail_p(z: float) -> float:
    """P(Z > z) for a standard normal Z."""
    return 0.5 * math.erfc(z / math.sqrt(2.0))


def outlier_probability(p_x: float, n: int) -> float:
    """P(Bin(n, p_x) < 1): no draw out of n reaches the observed value."""
    if n < 1:
        raise ValueError("sample size must be at least 1")
    if not 0.0 <= p_x <= 1.0:
        raise ValueError("p_x must be a probability")
    if p_x == 1.0:
        return 0.0
    return math.exp(n * math.log1p(-p_x))


def interpret_outlier(operator_id: int, sample: Sequence[float],
                      pooled: PooledDistribution) -> OutlierScore:
    n = len(sample)
    if n == 0:
        return OutlierScore(operator_id, 0.0, 0)
    if pooled.degenerate:
        log.debug("degenerate pooled distribution (count=%d); op %d scored 0",
                  pooled.count, operator_id)
        return OutlierScore(operator_id, 0.0, n)
    score = math.fsum(outlier_probability(upper_tail_p(z_score(x, pooled)), n) for x in sample)
    return OutlierScore(operator_id, score, n)


def score_all(samples: Mapping[int, Sequence[float]], operator_ids: Sequence[int],
              interpretation: str, family: Family | str = Family.NORMAL) -> dict:
    """Score every operator in ``operator_ids``; missing data maps to ``NO_DATA``
    for averaging and to 0 for outlier scoring."""
    if interpretation == "I1":
        return {op: interpret_average(samples.get(op, ())) for op in operator_ids}
    if interpretation == "I3":
        pooled = pool(samples, family)
        return {
            op: interpret_outlier(op, samples.get(op, ()), pooled).score
            for op in operator_ids
        }
    raise ValueError(f"unknown interpretation {interpretation!r}")
