"""Containers for solved frontier points and traced curves."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .prob import Channel, Distribution

__all__ = ["BRANCHES", "ValuePoint", "ValueCurve"]

BRANCHES = ("upper", "lower")


@dataclass(frozen=True, eq=False)
class ValuePoint:
    """One solved point of a value-of-information frontier.

    lam is the budget the point answers for; info is the amount the
    optimiser actually consumed, which stays at or below lam (within
    solver tolerance) and falls strictly short on clamped or stepped
    points.  beta is the inverse temperature of the solution: 0 pins the
    no-information optimum, while math.inf marks clamped full-information
    and step-solver points, where a slope is meaningless.  Channel
    problems fill channel; simplex resource problems fill solution.
    """

    lam: float
    value: float
    beta: float
    info: float
    channel: Channel | None = None
    solution: Distribution | None = None
    iterations: int = 0
    converged: bool = True
    note: str = ""

    def __post_init__(self) -> None:
        if math.isnan(self.lam) or self.lam < 0.0:
            raise ValueError("ValuePoint: lam must be >= 0")
        if not math.isfinite(self.value):
            raise ValueError("ValuePoint: value must be finite")
        if math.isnan(self.beta) or self.beta < 0.0:
            raise ValueError("ValuePoint: beta must be >= 0")
        if math.isnan(self.info) or self.info < -1e-12:
            raise ValueError("ValuePoint: info must be >= 0")


@dataclass(frozen=True, eq=False)
class ValueCurve:
    """Frontier points of one branch, keyed by strictly increasing budgets."""

    points: tuple[ValuePoint, ...]
    branch: str
    problem: object | None = None

    def __post_init__(self) -> None:
        object.__setattr__(self, "points", tuple(self.points))
        if self.branch not in BRANCHES:
            raise ValueError(f"ValueCurve: branch must be one of {BRANCHES}")
        if not self.points:
            raise ValueError("ValueCurve: at least one point required")
        lams = [p.lam for p in self.points]
        if any(b <= a for a, b in zip(lams, lams[1:])):
            raise ValueError("ValueCurve: budgets must be strictly increasing")

    def __len__(self) -> int:
        return len(self.points)

    @property
    def lambdas(self) -> np.ndarray:
        return np.array([p.lam for p in self.points])

    @property
    def values(self) -> np.ndarray:
        return np.array([p.value for p in self.points])

    @property
    def betas(self) -> np.ndarray:
        return np.array([p.beta for p in self.points])
