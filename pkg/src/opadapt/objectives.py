"""Benchmark problems F1..F10 as bounded maximization problems with optima at 0.

Every problem is written in its usual minimization form ``f(x) >= 0`` and the
fitness reported to the optimizer is ``-f(x)``.  Problems whose textbook
minimum is not zero (Shekel's foxholes, Schwefel, Watson) carry a shift
constant equal to ``f`` evaluated at a high-precision minimizer, so the
minimizer maps to exactly 0.
"""
from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from importlib import resources
from typing import Callable

import numpy as np

SOLVED_THRESHOLD = -1e-15


@dataclass(frozen=True, eq=False)
class ObjectiveSpec:
    id: str
    name: str
    dimension: int
    lower_bounds: np.ndarray
    upper_bounds: np.ndarray
    optimizer: np.ndarray
    function: Callable[[np.ndarray], float] = field(repr=False)
    shift: float = 0.0
    optimum_value: float = 0.0

    @property
    def ranges(self) -> np.ndarray:
        return self.upper_bounds - self.lower_bounds


def evaluate(spec: ObjectiveSpec, x, check: bool = True) -> float:
    """Maximization fitness of ``x`` (<= 0, equal to 0 at the optimum)."""
    x = np.asarray(x, dtype=float)
    if check:
        if x.shape != (spec.dimension,):
            raise ValueError(
                f"{spec.id} expects {spec.dimension} variables, got shape {x.shape}"
            )
        if np.any(x < spec.lower_bounds) or np.any(x > spec.upper_bounds):
            raise ValueError(f"{spec.id}: point outside the search box")
    return float(0.0 - (spec.function(x) - spec.shift))


def is_solved(fitness: float) -> bool:
    return fitness > SOLVED_THRESHOLD


# --- minimization forms -----------------------------------------------------

_FOXHOLE_GRID = np.array([-32.0, -16.0, 0.0, 16.0, 32.0])
_FOXHOLE_A1 = np.tile(_FOXHOLE_GRID, 5)
_FOXHOLE_A2 = np.repeat(_FOXHOLE_GRID, 5)
_FOXHOLE_J = np.arange(1, 26, dtype=float)


def shekel_foxholes(x: np.ndarray) -> float:
    d = _FOXHOLE_J + (x[0] - _FOXHOLE_A1) ** 6 + (x[1] - _FOXHOLE_A2) ** 6
    return 1.0 / (0.002 + float(np.sum(1.0 / d)))


def rastrigin(x: np.ndarray) -> float:
    return float(np.sum(x * x + 10.0 * (1.0 - np.cos(2.0 * np.pi * x))))


# per-coordinate maximizer of x*sin(sqrt|x|) on [-500, 500]
_SCHWEFEL_X = 420.96874635998205
_SCHWEFEL_PEAK = float(_SCHWEFEL_X * np.sin(np.sqrt(np.abs(_SCHWEFEL_X))))


def schwefel(x: np.ndarray) -> float:
    # each term is >= 0 exactly; clamp rounding noise at the peak
    terms = _SCHWEFEL_PEAK - x * np.sin(np.sqrt(np.abs(x)))
    return float(np.sum(np.maximum(terms, 0.0)))


def griewank(x: np.ndarray) -> float:
    i = np.arange(1, x.size + 1)
    return 1.0 + float(np.sum(x * x)) / 4000.0 - float(np.prod(np.cos(x / np.sqrt(i))))


def bohachevsky(x: np.ndarray) -> float:
    # Bohachevsky #1 with the 0.7 constant folded into the cosine terms
    return (
        x[0] ** 2
        + 2.0 * x[1] ** 2
        + 0.3 * (1.0 - math.cos(3.0 * math.pi * x[0]))
        + 0.4 * (1.0 - math.cos(4.0 * math.pi * x[1]))
    )


_WATSON_T = np.arange(1, 30) / 29.0


def watson(x: np.ndarray) -> float:
    n = x.size
    powers = _WATSON_T[:, None] ** np.arange(n)  # t^0 .. t^(n-1)
    deriv = powers[:, : n - 1] @ (np.arange(1, n) * x[1:])
    value = powers @ x
    r = deriv - value * value - 1.0
    return float(r @ r) + x[0] ** 2 + (x[1] - x[0] ** 2 - 1.0) ** 2


def colville(x: np.ndarray) -> float:
    x1, x2, x3, x4 = x
    return (
        100.0 * (x2 - x1 * x1) ** 2
        + (1.0 - x1) ** 2
        + 90.0 * (x4 - x3 * x3) ** 2
        + (1.0 - x3) ** 2
        + 10.1 * ((x2 - 1.0) ** 2 + (x4 - 1.0) ** 2)
        + 19.8 * (x2 - 1.0) * (x4 - 1.0)
    )


def _load_linear_system():
    with resources.files("opadapt.data").joinpath("linear_system.json").open() as fh:
        data = json.load(fh)
    return np.array(data["A"], dtype=float), np.array(data["b"], dtype=float), data["bounds"]


_SLE_A, _SLE_B, _SLE_BOUNDS = _load_linear_system()


def linear_system(x: np.ndarray) -> float:
    return float(np.sum(np.abs(_SLE_A @ x - _SLE_B)))


def ackley(x: np.ndarray) -> float:
    n = x.size
    a = 20.0 - 20.0 * math.exp(-0.2 * math.sqrt(float(np.sum(x * x)) / n))
    b = math.e - math.exp(float(np.sum(np.cos(2.0 * np.pi * x))) / n)
    return a + b


_NEUMAIER_B = np.array([8.0, 18.0, 44.0, 114.0])


def neumaier2(x: np.ndarray) -> float:
    k = np.arange(1, 5)
    moments = np.sum(x[None, :] ** k[:, None], axis=1)
    return float(np.sum((_NEUMAIER_B - moments) ** 2))


# --- catalog ----------------------------------------------------------------


def _make(pid, name, dim, lo, hi, fn, optimizer, shifted=False):
    lower = np.full(dim, float(lo))
    upper = np.full(dim, float(hi))
    opt = np.array(optimizer, dtype=float)
    shift = float(fn(opt)) if shifted else 0.0
    for arr in (lower, upper, opt):
        arr.setflags(write=False)
    return ObjectiveSpec(pid, name, dim, lower, upper, opt, fn, shift)


PROBLEMS: dict[str, ObjectiveSpec] = {
    spec.id: spec
    for spec in (
        _make("F1", "Shekel's Foxholes", 2, -65.536, 65.536, shekel_foxholes,
              [-31.97833483565697, -31.978334837300796], shifted=True),
        _make("F2", "Rastrigin", 20, -5.12, 5.12, rastrigin, np.zeros(20)),
        _make("F3", "Schwefel", 10, -500.0, 500.0, schwefel, np.full(10, _SCHWEFEL_X)),
        _make("F4", "Griewank", 10, -600.0, 600.0, griewank, np.zeros(10)),
        _make("F5", "Bohachevsky", 2, -100.0, 100.0, bohachevsky, np.zeros(2)),
        _make("F6", "Watson's", 5, -5.0, 5.0, watson,
              [-0.07140517010518785, 0.9700247047203899, 0.26616884651979517,
               -0.5398931870568662, 0.7107112218473483], shifted=True),
        _make("F7", "Colville's", 4, -10.0, 10.0, colville, np.ones(4)),
        _make("F8", "System of linear equations", 10, _SLE_BOUNDS[0], _SLE_BOUNDS[1],
              linear_system, np.ones(10)),
        _make("F9", "Ackley's", 25, -32.768, 32.768, ackley, np.zeros(25)),
        _make("F10", "Neumaier's #2", 4, 0.0, 4.0, neumaier2, [1.0, 2.0, 2.0, 3.0]),
    )
}


def get_problem(pid: str) -> ObjectiveSpec:
    try:
        return PROBLEMS[pid.upper()]
    except KeyError:
        raise KeyError(f"unknown problem {pid!r}; choose from {', '.join(PROBLEMS)}") from None
