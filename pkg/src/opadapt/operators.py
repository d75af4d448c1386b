"""The ten real-coded search operators.

Each operator takes its parents' genomes ordered best-first and returns a
single offspring genome, clamped to the search box.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from types import MappingProxyType
from typing import Callable, Mapping, Sequence

import numpy as np


@dataclass(frozen=True)
class OperatorConfig:
    id: int
    name: str
    arity: int
    params: Mapping[str, float] = field(default_factory=dict)


def clamp(x: np.ndarray, lower: np.ndarray, upper: np.ndarray) -> np.ndarray:
    return np.minimum(np.maximum(x, lower), upper)


def creep_shift(value: float, lower: float, upper: float, amplitude: float, rng) -> float:
    """Shift one gene by ``u * amplitude * (upper - lower)`` with u ~ U(-1, 1)."""
    u = rng.uniform(-1.0, 1.0)
    return min(max(value + u * amplitude * (upper - lower), lower), upper)


def most_dissimilar_gene(a: np.ndarray, b: np.ndarray, ranges: np.ndarray) -> int:
    # argmax returns the lowest index among ties
    return int(np.argmax(np.abs(a - b) / ranges))


# Operator bodies: (parents best-first, params, rng, lower, upper) -> unclamped child

def _wright(p, prm, rng, lo, hi):
    best, worst = p
    return prm["r"] * (best - worst) + best


def _simple(p, prm, rng, lo, hi):
    best, worst = p
    n = best.size
    if n == 1:
        return best.copy()
    k = int(rng.integers(1, n))
    return np.concatenate((best[:k], worst[k:]))


def _extended_line(p, prm, rng, lo, hi):
    a, b = p
    return a + prm["alpha"] * (b - a)


def _uniform(p, prm, rng, lo, hi):
    a, b = p
    return np.where(rng.random(a.size) < 0.5, a, b)


def _blx(p, prm, rng, lo, hi):
    a, b = p
    cmin = np.minimum(a, b)
    cmax = np.maximum(a, b)
    spread = prm["alpha"] * (cmax - cmin)
    return rng.uniform(cmin - spread, cmax + spread)


def _differential(p, prm, rng, lo, hi):
    a, b, c = p
    return a + prm["F"] * (b - c)


def _swap(p, prm, rng, lo, hi):
    better, worse = p
    i = most_dissimilar_gene(better, worse, hi - lo)
    child = better.copy()
    child[i] = worse[i]
    return child


def _raise(p, prm, rng, lo, hi):
    (x,) = p
    u = rng.uniform(-1.0, 1.0)
    return x + u * prm["A"] * (hi - lo)


def _creep(p, prm, rng, lo, hi):
    (x,) = p
    i = int(rng.integers(x.size))
    child = x.copy()
    child[i] = creep_shift(x[i], lo[i], hi[i], prm["A"], rng)
    return child


def _random_mutation(p, prm, rng, lo, hi):
    (x,) = p
    i = int(rng.integers(x.size))
    child = x.copy()
    child[i] = rng.uniform(lo[i], hi[i])
    return child


_BODIES: dict[int, Callable] = {
    1: _wright,
    2: _simple,
    3: _extended_line,
    4: _uniform,
    5: _blx,
    6: _differential,
    7: _swap,
    8: _raise,
    9: _creep,
    10: _random_mutation,
}


def _cfg(op_id, name, arity, **params):
    return OperatorConfig(op_id, name, arity, MappingProxyType(dict(params)))


DIFFERENTIAL_F = 0.8

OPERATORS: tuple[OperatorConfig, ...] = (
    _cfg(1, "Wright's Heuristic Crossover", 2, r=0.5),
    _cfg(2, "Simple Crossover", 2),
    _cfg(3, "Extended Line Crossover", 2, alpha=0.3),
    _cfg(4, "Uniform Crossover", 2),
    _cfg(5, "BLX-alpha", 2, alpha=0.2),
    _cfg(6, "Differential Operator", 3, F=DIFFERENTIAL_F),
    _cfg(7, "Swap", 2),
    _cfg(8, "Raise", 1, A=0.01),
    _cfg(9, "Real Number Creep", 1, A=0.001),
    _cfg(10, "Single Point Random Mutation", 1),
)
N_OPERATORS = len(OPERATORS)
MUTATION_OP = 10


def get_operator(op_id: int) -> OperatorConfig:
    if not 1 <= op_id <= N_OPERATORS:
        raise KeyError(f"operator id must be in 1..{N_OPERATORS}, got {op_id}")
    return OPERATORS[op_id - 1]


def with_params(op: OperatorConfig, **params: float) -> OperatorConfig:
    """Copy of ``op`` with some static parameters replaced, e.g. ``F`` for op 6."""
    unknown = set(params) - set(op.params)
    if unknown:
        raise KeyError(f"{op.name} has no parameter(s) {sorted(unknown)}")
    return OperatorConfig(op.id, op.name, op.arity, MappingProxyType({**op.params, **params}))


def apply(
    op: OperatorConfig,
    parents: Sequence[np.ndarray],
    rng: np.random.Generator,
    lower: np.ndarray,
    upper: np.ndarray,
) -> np.ndarray:
    """Produce one offspring genome from ``parents`` (sorted best-first)."""
    if len(parents) != op.arity:
        raise ValueError(f"{op.name} needs {op.arity} parent(s), got {len(parents)}")
    child = _BODIES[op.id](parents, op.params, rng, lower, upper)
    return clamp(np.asarray(child, dtype=float), lower, upper)
