"""Evaluation lattices shared by the library and the CLI."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np


@dataclass(frozen=True)
class GridSpec:
    """Uniform 1-D lattice with inclusive endpoints, optionally carrying a
    second axis (used for (eta, delta) surfaces)."""

    start: float
    stop: float
    count: int
    second: "GridSpec | None" = None

    def __post_init__(self):
        if not self.start < self.stop:
            raise ValueError(f"grid start must be < stop, got [{self.start}, {self.stop}]")
        if self.count < 2:
            raise ValueError(f"grid count must be >= 2, got {self.count}")

    def points(self) -> np.ndarray:
        return np.linspace(self.start, self.stop, self.count)

    @property
    def step(self) -> float:
        return (self.stop - self.start) / (self.count - 1)
