"""Operator-probability adaptation on a fixed cycle.

Every ``cycle_length`` generations the collected measurements are scored,
the scores are turned into a target distribution, and the adapted
probabilities move halfway towards that target (``memory_weight`` of the old
value is kept) before a floor is enforced.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .credit import MeasurementWindow
from .interpret import Family, score_all
from .operators import N_OPERATORS

MEMORY_WEIGHT = 0.5
FLOOR = 0.02
CYCLE_LENGTH = 20
DEFAULT_ADAPTED = tuple(range(1, N_OPERATORS))  # op 10 belongs to diversity control


def scores_to_target(scores: Sequence[float | None]) -> np.ndarray:
    """Shift scores to be non-negative and normalize them to sum to one.

    ``None`` marks an operator without data; it receives the mean shifted
    score of the others.  No usable data at all gives a uniform target.
    """
    n = len(scores)
    known = [s for s in scores if s is not None]
    if not known:
        return np.full(n, 1.0 / n)
    shift = min(min(known), 0.0)
    shifted = [s - shift for s in known]
    fill = sum(shifted) / len(shifted)
    vals = np.array([fill if s is None else s - shift for s in scores], dtype=float)
    total = vals.sum()
    if not total > 0.0:
        return np.full(n, 1.0 / n)
    return vals / total


def apply_floor(p: np.ndarray, floor: float, mass: float = 1.0) -> np.ndarray:
    """Water-filling: clamp entries below ``floor`` and rescale the rest so the
    vector sums to ``mass``; repeated until no free entry falls below the floor."""
    p = np.asarray(p, dtype=float)
    if floor * p.size > mass + 1e-12:
        raise ValueError("floor too high for the number of entries")
    fixed = np.zeros(p.size, dtype=bool)
    out = p.copy()
    while True:
        free = ~fixed
        remaining = mass - floor * fixed.sum()
        base = p[free]
        total = base.sum()
        out[free] = base * (remaining / total) if total > 0 else remaining / free.sum()
        out[fixed] = floor
        newly = free & (out < floor)
        if not newly.any():
            return out
        fixed |= newly


def update(p_old, target, memory_weight: float = MEMORY_WEIGHT, floor: float = FLOOR,
           mass: float | None = None) -> np.ndarray:
    """Blend old probabilities with the target, then enforce the floor.

    ``target`` sums to one; it is scaled to ``mass`` (the old vector's total
    by default) so a sub-block of a larger probability vector keeps its share.
    """
    p_old = np.asarray(p_old, dtype=float)
    target = np.asarray(target, dtype=float)
    if mass is None:
        mass = float(p_old.sum())
    mixed = memory_weight * p_old + (1.0 - memory_weight) * mass * target
    return apply_floor(mixed, floor, mass)


@dataclass
class OperatorPortfolio:
    probabilities: np.ndarray
    adapted_ids: tuple[int, ...] = DEFAULT_ADAPTED
    memory_weight: float = MEMORY_WEIGHT
    floor: float = FLOOR
    cycle_length: int = CYCLE_LENGTH

    @classmethod
    def uniform(cls, **kw) -> "OperatorPortfolio":
        return cls(np.full(N_OPERATORS, 1.0 / N_OPERATORS), **kw)

    def __post_init__(self):
        self.probabilities = np.asarray(self.probabilities, dtype=float)
        if self.probabilities.shape != (N_OPERATORS,):
            raise ValueError(f"expected {N_OPERATORS} probabilities")
        if abs(self.probabilities.sum() - 1.0) > 1e-9:
            raise ValueError("probabilities must sum to 1")

    def apply_scores(self, scores: dict) -> np.ndarray:
        """Update the adapted block from per-operator scores (``None`` = no data)."""
        ids = np.array(self.adapted_ids) - 1
        target = scores_to_target([scores.get(op) for op in self.adapted_ids])
        block = update(self.probabilities[ids], target, self.memory_weight, self.floor)
        probs = self.probabilities.copy()
        probs[ids] = block
        self.probabilities = probs
        return probs


@dataclass
class Adapter:
    """Feedback controller for one run: measurement window + update schedule."""

    portfolio: OperatorPortfolio
    measurement: str
    interpretation: str
    family: Family = Family.NORMAL
    window: MeasurementWindow = field(init=False)
    history: list[tuple[int, np.ndarray]] = field(default_factory=list)
    updates: list[int] = field(default_factory=list)
    measurement_log: list[tuple] | None = None

    def __post_init__(self):
        self.window = MeasurementWindow(self.measurement, 0)
        self.history.append((0, self.portfolio.probabilities.copy()))

    def observe(self, events, pop) -> None:
        self.window.observe(events, pop)

    def on_generation(self, generation: int) -> bool:
        """Run an update when ``generation`` closes a cycle; returns whether it fired."""
        if generation == 0 or generation % self.portfolio.cycle_length:
            return False
        samples = self.window.samples()
        scores = score_all(samples, self.portfolio.adapted_ids, self.interpretation, self.family)
        self.portfolio.apply_scores(scores)
        if self.measurement_log is not None:
            self.measurement_log.extend(self.window.log_rows(generation))
        self.window.reset(generation)
        self.history.append((generation, self.portfolio.probabilities.copy()))
        self.updates.append(generation)
        return True
