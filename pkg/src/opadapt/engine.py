"""Core real-coded EA: initialization, tournament mating/culling, uniqueness.

One generation creates ``capacity`` offspring, each by a single operator,
then culls the combined parent + offspring pool back to ``capacity`` by
binary tournaments with replacement.  Genomes are kept unique by exact
equality.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from . import operators as ops
from .objectives import ObjectiveSpec, evaluate

POPULATION_SIZE = 30
MAX_CULL_TOURNAMENTS = 50 * POPULATION_SIZE
MAX_IMMIGRANT_TRIES = 1000


@dataclass(slots=True, eq=False)
class Solution:
    genome: np.ndarray
    fitness: float
    birth_generation: int = 0
    creator_op: int | None = None
    parent_fitnesses: tuple[float, ...] = ()

    @property
    def key(self) -> bytes:
        return self.genome.tobytes()


@dataclass(slots=True)
class Population:
    members: list[Solution]
    generation: int = 0
    capacity: int = POPULATION_SIZE

    def __len__(self) -> int:
        return len(self.members)

    def best(self) -> Solution:
        return max(self.members, key=lambda s: s.fitness)

    def fitnesses(self) -> np.ndarray:
        return np.array([m.fitness for m in self.members])


@dataclass(frozen=True)
class DiversityControl:
    p0: float = 0.02
    delta: float = 0.001


@dataclass(slots=True, eq=False)
class ReproductionEvent:
    op_id: int
    parents: tuple[Solution, ...]
    offspring: Solution
    generation: int
    offspring_survived: bool = False
    parents_survived: tuple[bool, ...] = field(default_factory=tuple)

    @property
    def best_parent_fitness(self) -> float:
        return max(p.fitness for p in self.parents)


def parent_distance(a, b, lower, upper) -> float:
    """Range-normalized Euclidean distance between two genomes or solutions."""
    ga = a.genome if isinstance(a, Solution) else a
    gb = b.genome if isinstance(b, Solution) else b
    if len(ga) != len(gb):
        raise ValueError("parents differ in dimension")
    z = (np.subtract(ga, gb)) / (np.subtract(upper, lower))
    return math.sqrt(float(z @ z))


def mutation_probability(d: float, ctl: DiversityControl = DiversityControl()) -> float:
    if d < 0:
        raise ValueError("distance must be non-negative")
    return ctl.p0 + 0.5 * ctl.delta ** (d / ctl.delta)


def _tournament_index(fitness: Sequence[float], rng: np.random.Generator) -> int:
    i, j = rng.integers(len(fitness), size=2)
    return int(j) if fitness[j] > fitness[i] else int(i)


def tournament_select(pool: Sequence[Solution], rng: np.random.Generator) -> Solution:
    if not pool:
        raise ValueError("tournament over an empty pool")
    return pool[_tournament_index([s.fitness for s in pool], rng)]


def _random_genome(spec: ObjectiveSpec, rng) -> np.ndarray:
    return rng.uniform(spec.lower_bounds, spec.upper_bounds)


def _immigrant(spec, rng, seen: set, generation: int) -> Solution:
    for _ in range(MAX_IMMIGRANT_TRIES):
        g = _random_genome(spec, rng)
        if g.tobytes() not in seen:
            seen.add(g.tobytes())
            return Solution(g, evaluate(spec, g, check=False), generation)
    raise RuntimeError("could not sample a unique genome")


def initialize(spec: ObjectiveSpec, rng, size: int = POPULATION_SIZE) -> Population:
    seen: set[bytes] = set()
    members = [_immigrant(spec, rng, seen, 0) for _ in range(size)]
    return Population(members, 0, size)


def draw_operator(weights: np.ndarray, p_mut: float, u: float) -> int:
    """Pick an operator id from a uniform draw ``u``.

    Op 10 is chosen with probability ``p_mut``; otherwise ops 1-9 are chosen
    in proportion to ``weights`` (their unnormalized weights).  If all weights
    are zero op 10 is always chosen.
    """
    weights = np.asarray(weights, dtype=float)
    return _pick_operator(np.cumsum(weights), float(weights.sum()), p_mut, u)


def effective_probabilities(probabilities, p_mut: float) -> np.ndarray:
    """Operator probabilities actually used for one mating pair."""
    w = np.asarray(probabilities, dtype=float)[: ops.N_OPERATORS - 1]
    out = np.zeros(ops.N_OPERATORS)
    if w.sum() <= 0.0:
        out[-1] = 1.0
        return out
    out[:-1] = (1.0 - p_mut) * w / w.sum()
    out[-1] = p_mut
    return out


def _pick_operator(cum: np.ndarray, total: float, p_mut: float, u: float) -> int:
    if total <= 0.0 or u < p_mut:
        return ops.MUTATION_OP
    idx = int(np.searchsorted(cum, (u - p_mut) / (1.0 - p_mut) * total, side="right"))
    if idx >= cum.size:
        idx = int(np.flatnonzero(np.diff(cum, prepend=0.0))[-1])
    return idx + 1


def _reproduce(members, fit, pair_draws, u, cum, total, operators, control, spec, inv_range, rng):
    """One mating: two tournaments, operator draw, one offspring genome."""
    i0, j0, i1, j1, i2, j2 = pair_draws
    ia = j0 if fit[j0] > fit[i0] else i0
    ib = j1 if fit[j1] > fit[i1] else i1
    z = (members[ia].genome - members[ib].genome) * inv_range
    d = math.sqrt(float(z @ z))
    op_id = _pick_operator(cum, total, mutation_probability(d, control), u)
    op = operators[op_id - 1]
    if op.arity == 1:
        idx = (ia,)
    elif op.arity == 2:
        idx = (ia, ib) if fit[ia] >= fit[ib] else (ib, ia)
    else:
        ic = j2 if fit[j2] > fit[i2] else i2
        idx = tuple(sorted((ia, ib, ic), key=lambda i: -fit[i]))
    child = ops.apply(op, [members[i].genome for i in idx], rng,
                      spec.lower_bounds, spec.upper_bounds)
    return op_id, idx, child


def step_generation(
    pop: Population,
    probabilities,
    spec: ObjectiveSpec,
    rng: np.random.Generator,
    control: DiversityControl = DiversityControl(),
    operators: Sequence[ops.OperatorConfig] = ops.OPERATORS,
) -> tuple[Population, list[ReproductionEvent]]:
    """Advance one generation; returns the culled population and its events.

    Offspring may duplicate existing genomes; culling keeps only the first
    tournament winner per distinct genome and refills with more tournaments.
    """
    members = pop.members
    n = len(members)
    cap = pop.capacity
    fit = [m.fitness for m in members]
    weights = np.asarray(probabilities, dtype=float)[: ops.N_OPERATORS - 1]
    cum = np.cumsum(weights)
    total = float(weights.sum())
    inv_range = 1.0 / spec.ranges
    gen = pop.generation
    known = {m.key: m.fitness for m in members}

    # tournament pairs for the two mates (+ a third for 3-parent operators)
    draws = rng.integers(n, size=(cap, 6)).tolist()
    op_draws = rng.random(cap).tolist()

    offspring: list[Solution] = []
    events: list[tuple[ReproductionEvent, tuple[int, ...]]] = []
    for k in range(cap):
        op_id, idx, child = _reproduce(members, fit, draws[k], op_draws[k], cum, total,
                                       operators, control, spec, inv_range, rng)
        key = child.tobytes()
        f = known.get(key)
        if f is None:
            f = known[key] = evaluate(spec, child, check=False)
        parents = tuple(members[i] for i in idx)
        sol = Solution(child, f, gen, op_id, tuple(p.fitness for p in parents))
        offspring.append(sol)
        events.append((ReproductionEvent(op_id, parents, sol, gen), idx))

    pool = members + offspring
    pool_fit = np.array([s.fitness for s in pool])
    chosen: list[int] = []
    chosen_keys: set[bytes] = set()
    tournaments = 0
    while len(chosen) < cap and tournaments < MAX_CULL_TOURNAMENTS:
        t = rng.integers(len(pool), size=(cap, 2))
        winners = np.where(pool_fit[t[:, 1]] > pool_fit[t[:, 0]], t[:, 1], t[:, 0]).tolist()
        for w in winners:
            key = pool[w].key
            if key not in chosen_keys:
                chosen_keys.add(key)
                chosen.append(w)
                if len(chosen) == cap:
                    break
        tournaments += cap
    survivors = [pool[k] for k in chosen]
    while len(survivors) < cap:
        survivors.append(_immigrant(spec, rng, chosen_keys, gen))

    alive = set(chosen)
    for k, (ev, idx) in enumerate(events):
        ev.offspring_survived = n + k in alive
        ev.parents_survived = tuple(i in alive for i in idx)

    return Population(survivors, gen + 1, cap), [ev for ev, _ in events]
