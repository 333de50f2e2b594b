"""Finite probability primitives: distributions, channels, entropy, divergences.

All information quantities are measured in nats.  Vectors are plain numpy
arrays underneath; the wrapper types only pin down validation and
immutability.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

__all__ = [
    "ZERO_TOL",
    "Distribution",
    "Channel",
    "entropy",
    "kl_divergence",
    "output_marginal",
    "mutual_information",
    "product",
]

# Probability entries below this are treated as exact zeros inside logarithm
# terms, so 0*log(0) cannot leak NaN into a sum.
ZERO_TOL = 1e-15

# Mass may miss 1 by at most this before construction fails; smaller misses
# are silently renormalised.  Round-off accumulates, modelling errors do not.
_SUM_TOL = 1e-9

_NEG_TOL = 1e-12


def _clean_vector(values, what: str) -> np.ndarray:
    arr = np.array(values, dtype=float)
    if arr.ndim != 1 or arr.size == 0:
        raise ValueError(f"{what}: expected a non-empty 1-d array, got shape {arr.shape}")
    if not np.all(np.isfinite(arr)):
        raise ValueError(f"{what}: entries must be finite")
    if np.any(arr < -_NEG_TOL):
        raise ValueError(f"{what}: negative entry {float(arr.min())!r}")
    np.clip(arr, 0.0, None, out=arr)
    return arr


@dataclass(frozen=True, eq=False)
class Distribution:
    """An immutable probability vector over finitely many outcomes."""

    probs: np.ndarray
    labels: tuple[str, ...] | None = None

    def __post_init__(self) -> None:
        arr = _clean_vector(self.probs, "Distribution")
        total = float(arr.sum())
        if abs(total - 1.0) > _SUM_TOL:
            raise ValueError(
                f"Distribution: mass {total!r} is outside the +-{_SUM_TOL} window around 1"
            )
        arr /= total
        arr.flags.writeable = False
        object.__setattr__(self, "probs", arr)
        if self.labels is not None:
            labels = tuple(str(s) for s in self.labels)
            if len(labels) != arr.size:
                raise ValueError("Distribution: labels and probs length mismatch")
            object.__setattr__(self, "labels", labels)

    def __len__(self) -> int:
        return int(self.probs.size)

    @classmethod
    def uniform(cls, n: int, labels=None) -> "Distribution":
        if n < 1:
            raise ValueError("Distribution.uniform: n must be positive")
        return cls(np.full(n, 1.0 / n), labels)

    @classmethod
    def point_mass(cls, n: int, index: int, labels=None) -> "Distribution":
        if not 0 <= index < n:
            raise ValueError("Distribution.point_mass: index out of range")
        probs = np.zeros(n)
        probs[index] = 1.0
        return cls(probs, labels)


@dataclass(frozen=True, eq=False)
class Channel:
    """A row-stochastic matrix: one output distribution per input symbol."""

    rows: np.ndarray

    def __post_init__(self) -> None:
        arr = np.array(self.rows, dtype=float)
        if arr.ndim != 2 or arr.size == 0:
            raise ValueError(f"Channel: expected a non-empty 2-d array, got shape {arr.shape}")
        if not np.all(np.isfinite(arr)):
            raise ValueError("Channel: entries must be finite")
        if np.any(arr < -_NEG_TOL):
            raise ValueError("Channel: negative entry")
        np.clip(arr, 0.0, None, out=arr)
        sums = arr.sum(axis=1)
        if np.any(np.abs(sums - 1.0) > _SUM_TOL):
            raise ValueError("Channel: a row's mass is outside the +-1e-09 window around 1")
        arr /= sums[:, None]
        arr.flags.writeable = False
        object.__setattr__(self, "rows", arr)

    @property
    def n_inputs(self) -> int:
        return int(self.rows.shape[0])

    @property
    def n_outputs(self) -> int:
        return int(self.rows.shape[1])

    def row(self, i: int) -> Distribution:
        return Distribution(self.rows[i])

    @classmethod
    def deterministic(cls, assignment, n_outputs: int) -> "Channel":
        """The 0/1 channel sending input a to output assignment[a]."""
        assignment = tuple(int(b) for b in assignment)
        rows = np.zeros((len(assignment), int(n_outputs)))
        for a, b in enumerate(assignment):
            if not 0 <= b < n_outputs:
                raise ValueError("Channel.deterministic: assignment entry out of range")
            rows[a, b] = 1.0
        return cls(rows)


def entropy(dist) -> float:
    """Shannon entropy in nats, with the 0*log(0) := 0 convention."""
    p = dist.probs if isinstance(dist, Distribution) else np.asarray(dist, dtype=float)
    p = p[p > ZERO_TOL]
    return float(-np.sum(p * np.log(p))) + 0.0


def kl_divergence(p, q) -> float:
    """Relative entropy D(p || q) in nats.

    A support violation (p charges an outcome q rules out) yields +inf;
    that is a legitimate value of the divergence here, not an error.
    """
    pv = p.probs if isinstance(p, Distribution) else np.asarray(p, dtype=float)
    qv = q.probs if isinstance(q, Distribution) else np.asarray(q, dtype=float)
    if pv.shape != qv.shape:
        raise ValueError("kl_divergence: dimension mismatch")
    mask = pv > ZERO_TOL
    if np.any(qv[mask] <= ZERO_TOL):
        return math.inf
    ps = pv[mask]
    total = float(np.sum(ps * (np.log(ps) - np.log(qv[mask]))))
    # Same convention as mutual_information: rounding must not make a
    # provably non-negative quantity dip below zero.
    return 0.0 if -1e-12 < total < 0.0 else total


def output_marginal(prior: Distribution, channel: Channel) -> Distribution:
    """Push the input distribution through the channel."""
    if len(prior) != channel.n_inputs:
        raise ValueError("output_marginal: dimension mismatch")
    return Distribution(prior.probs @ channel.rows)


def mutual_information(prior: Distribution, channel: Channel) -> float:
    """Information I(A;B) of the joint prior (x) channel, in nats."""
    if len(prior) != channel.n_inputs:
        raise ValueError("mutual_information: dimension mismatch")
    q = prior.probs
    rows = channel.rows
    marginal = q @ rows
    joint = q[:, None] * rows
    mask = joint > ZERO_TOL
    with np.errstate(divide="ignore", invalid="ignore"):
        logs = np.log(rows) - np.log(marginal)[None, :]
    total = float(np.sum(joint[mask] * logs[mask]))
    # An exact zero beats a -1e-17 artifact when the joint is a product.
    return 0.0 if -1e-12 < total < 0.0 else total


def product(p: Distribution, q: Distribution) -> Distribution:
    """The independent joint of two distributions, row-major flattened."""
    return Distribution(np.outer(p.probs, q.probs).ravel())
