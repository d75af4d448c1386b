"""The EA designs compared in the experiments."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..operators import N_OPERATORS


@dataclass(frozen=True)
class DesignSpec:
    name: str
    measurement: str | None = None
    interpretation: str | None = None
    diversity_control: bool = True

    @property
    def adaptive(self) -> bool:
        return self.measurement is not None

    def initial_probabilities(self) -> np.ndarray:
        p = np.full(N_OPERATORS, 1.0 / N_OPERATORS)
        if self.name == "SGA1":
            # uniform crossover plus diversity-controlled mutation only
            p = np.zeros(N_OPERATORS)
            p[3] = 0.98
            p[9] = 0.02
        return p


def _design(name: str) -> DesignSpec:
    if name.startswith("SGA"):
        return DesignSpec(name)
    a, i = name.split("-")
    return DesignSpec(name, a, i)


DESIGN_NAMES = ("SGA1", "SGA2", "A1-I1", "A2-I1", "A4-I1", "A5-I1", "A5-I3", "A6-I1", "A6-I3")
DESIGNS: dict[str, DesignSpec] = {n: _design(n) for n in DESIGN_NAMES}
BASELINE = "SGA1"


def get_design(name: str) -> DesignSpec:
    try:
        return DESIGNS[name.upper()]
    except KeyError:
        raise KeyError(f"unknown design {name!r}; choose from {', '.join(DESIGNS)}") from None
