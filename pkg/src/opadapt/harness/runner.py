"""Single seeded EA run for one design on one problem."""
from __future__ import annotations

import hashlib
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from ..adapt import Adapter, OperatorPortfolio
from ..engine import DiversityControl, initialize, step_generation
from ..interpret import Family
from ..objectives import get_problem, is_solved
from .designs import get_design


def derive_seed(master_seed: int, design: str, problem: str, run_index: int) -> int:
    """64-bit run seed: BLAKE2b of ``"{master}|{design}|{problem}|{run}"``, big-endian."""
    key = f"{master_seed}|{design}|{problem}|{run_index}".encode()
    return int.from_bytes(hashlib.blake2b(key, digest_size=8).digest(), "big")


@dataclass
class RunRecord:
    design: str
    problem: str
    run_index: int
    seed: int
    best_fitness_at: dict[int, float] = field(default_factory=dict)
    solved_generation: int | None = None


@dataclass
class RunResult:
    record: RunRecord
    update_generations: list[int] = field(default_factory=list)
    probability_history: list[tuple[int, np.ndarray]] = field(default_factory=list)
    measurements: list[tuple] = field(default_factory=list)


def stopping_points(max_generations: int, interval: int) -> list[int]:
    if interval < 1 or max_generations % interval:
        raise ValueError("stopping interval must divide the generation budget")
    return list(range(interval, max_generations + 1, interval))


def run_design(
    design: str,
    problem: str,
    seed: int,
    max_generations: int = 2000,
    interval: int = 100,
    *,
    run_index: int = 0,
    family: Family | str = Family.NORMAL,
    keep_measurements: bool = False,
    on_update: Callable[[int, np.ndarray], None] | None = None,
) -> RunResult:
    spec = get_problem(problem)
    dspec = get_design(design)
    stops = set(stopping_points(max_generations, interval))
    rng = np.random.default_rng(seed)
    portfolio = OperatorPortfolio(dspec.initial_probabilities())
    adapter = None
    if dspec.adaptive:
        adapter = Adapter(portfolio, dspec.measurement, dspec.interpretation, Family(family),
                          measurement_log=[] if keep_measurements else None)
    control = DiversityControl()

    record = RunRecord(dspec.name, spec.id, run_index, seed)
    pop = initialize(spec, rng)
    best = pop.best().fitness
    if is_solved(best):
        record.solved_generation = 0
    for _ in range(max_generations):
        pop, events = step_generation(pop, portfolio.probabilities, spec, rng, control)
        gen = pop.generation
        gen_best = max([pop.best().fitness] + [ev.offspring.fitness for ev in events])
        if gen_best > best:
            best = gen_best
        if record.solved_generation is None and is_solved(best):
            record.solved_generation = gen
        if adapter is not None:
            adapter.observe(events, pop)
            if adapter.on_generation(gen) and on_update is not None:
                on_update(gen, portfolio.probabilities.copy())
        if gen in stops:
            record.best_fitness_at[gen] = best

    result = RunResult(record)
    if adapter is not None:
        result.update_generations = list(adapter.updates)
        result.probability_history = list(adapter.history)
        result.measurements = adapter.measurement_log or []
    else:
        result.probability_history = [(0, portfolio.probabilities.copy())]
    return result
