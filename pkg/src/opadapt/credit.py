"""Per-operator performance measurements (A1..A6) over an adaptation window.

A1  raw offspring fitness
A2  offspring / better-parent fitness ratio, on a positively shifted scale
A3  1 if the offspring survived culling, else 0
A4  1 if the offspring and at least one of its parents survived, else 0
A5  running age (generations survived) of window-born solutions, re-reported
    every generation they stay alive
A6  within-population rank (best = population size, midranks for ties)

Solutions without a creating operator (initial population, immigrants)
never produce measurements.
"""
from __future__ import annotations

from collections import defaultdict
from enum import Enum

from scipy.stats import rankdata

from .engine import Population, ReproductionEvent


class MeasurementKind(str, Enum):
    A1 = "A1"
    A2 = "A2"
    A3 = "A3"
    A4 = "A4"
    A5 = "A5"
    A6 = "A6"

    @property
    def per_event(self) -> bool:
        return self in EVENT_KINDS


EVENT_KINDS = frozenset({MeasurementKind.A1, MeasurementKind.A2, MeasurementKind.A3, MeasurementKind.A4})
POPULATION_KINDS = frozenset({MeasurementKind.A5, MeasurementKind.A6})

A2_EPS = 1e-6


def a2_ratio(offspring_fitness: float, parent_fitness: float, worst: float, best: float) -> float:
    """Fitness ratio with both terms shifted above the window's worst fitness."""
    spread = best - worst
    if spread <= 0.0:
        return 1.0
    base = worst - A2_EPS * spread
    return (offspring_fitness - base) / (parent_fitness - base)


def record_event(kind, event: ReproductionEvent, window_range: tuple[float, float] | None = None):
    """Measurements produced by one reproduction event after culling.

    ``window_range`` is (worst, best) fitness seen in the window; A2 needs it.
    """
    kind = MeasurementKind(kind)
    op = event.op_id
    if kind is MeasurementKind.A1:
        return [(op, event.offspring.fitness)]
    if kind is MeasurementKind.A2:
        if window_range is None:
            raise ValueError("A2 needs the window's fitness range")
        worst, best = window_range
        return [(op, a2_ratio(event.offspring.fitness, event.best_parent_fitness, worst, best))]
    if kind is MeasurementKind.A3:
        return [(op, 1.0 if event.offspring_survived else 0.0)]
    if kind is MeasurementKind.A4:
        family = event.offspring_survived and any(event.parents_survived)
        return [(op, 1.0 if family else 0.0)]
    raise ValueError(f"{kind.value} is a population measurement")


def record_population(kind, pop: Population, window_start: int = 0):
    """A5/A6 measurements for members born at or after ``window_start``."""
    kind = MeasurementKind(kind)
    if kind is MeasurementKind.A5:
        return [
            (m.creator_op, float(pop.generation - m.birth_generation))
            for m in pop.members
            if m.creator_op is not None and m.birth_generation >= window_start
        ]
    if kind is MeasurementKind.A6:
        ranks = rankdata(pop.fitnesses(), method="average")
        return [
            (m.creator_op, float(r))
            for m, r in zip(pop.members, ranks)
            if m.creator_op is not None and m.birth_generation >= window_start
        ]
    raise ValueError(f"{kind.value} is an event measurement")


class MeasurementWindow:
    """Collects one measurement kind per operator until the next reset."""

    def __init__(self, kind, start_generation: int = 0):
        self.kind = MeasurementKind(kind)
        self.reset(start_generation)

    def reset(self, start_generation: int) -> None:
        self.start_generation = start_generation
        self._values: dict[int, list[float]] = defaultdict(list)
        self._a2: list[tuple[int, float, float]] = []
        self._log: list[tuple[int, int, float]] = []

    def observe(self, events, pop: Population) -> None:
        """Feed one generation's events and the culled population."""
        if self.kind is MeasurementKind.A2:
            for ev in events:
                self._a2.append((ev.op_id, ev.offspring.fitness, ev.best_parent_fitness))
            return
        if self.kind.per_event:
            found = [m for ev in events for m in record_event(self.kind, ev)]
        else:
            found = record_population(self.kind, pop, self.start_generation)
        for op, v in found:
            self._values[op].append(v)
            self._log.append((pop.generation, op, v))

    def _a2_values(self) -> dict[int, list[float]]:
        if not self._a2:
            return {}
        seen = [f for _, o, p in self._a2 for f in (o, p)]
        worst, best = min(seen), max(seen)
        out: dict[int, list[float]] = defaultdict(list)
        for op, off, par in self._a2:
            out[op].append(a2_ratio(off, par, worst, best))
        return dict(out)

    def samples(self) -> dict[int, list[float]]:
        """Operator id -> measurement values collected so far."""
        if self.kind is MeasurementKind.A2:
            return self._a2_values()
        return {op: list(v) for op, v in self._values.items()}

    def log_rows(self, generation: int | None = None):
        """(generation, operator_id, kind, value) rows for the debug dump."""
        if self.kind is MeasurementKind.A2:
            g = self.start_generation if generation is None else generation
            return [(g, op, self.kind.value, v) for op, vals in sorted(self._a2_values().items()) for v in vals]
        return [(g, op, self.kind.value, v) for g, op, v in self._log]
