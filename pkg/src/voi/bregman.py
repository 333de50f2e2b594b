"""Simplex resource allocation under a Bregman divergence budget.

constrained_value maximises (or minimises) a linear payoff over the
probability simplex subject to D_F(y, reference) <= lam, for one of two
generator kinds given in closed form: relative negative entropy, whose
divergence is the KL divergence and whose tilt map is the Gibbs
distribution, and the squared Euclidean norm, whose divergence is half the
squared distance and whose tilt map is a sorted-threshold projection onto
the simplex.  This is the one-shot analogue of the channel solver: fixing
the reference at a converged channel's output marginal makes the Gibbs
tilt reproduce that channel's rows exactly.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .frontier import ValuePoint
from .prob import Distribution, ZERO_TOL

__all__ = [
    "NEGATIVE_ENTROPY",
    "SQUARED_EUCLIDEAN",
    "DIVERGENCE_TOL",
    "BregmanGenerator",
    "ResourceProblem",
    "bregman_divergence",
    "gibbs_solution",
    "constrained_value",
    "project_to_simplex",
]

NEGATIVE_ENTROPY = "negative_entropy"
SQUARED_EUCLIDEAN = "squared_euclidean"
_KINDS = (NEGATIVE_ENTROPY, SQUARED_EUCLIDEAN)

# Bisection accuracy for |achieved divergence - requested budget|.
DIVERGENCE_TOL = 1e-8

_FLUSH = 1e-300
_BETA_CEILING = 2.0 ** 60
_MAX_BISECT = 200


def project_to_simplex(v) -> np.ndarray:
    """Euclidean projection of a real vector onto the probability simplex.

    Sorted-threshold method: keep the largest support whose retained
    coordinates stay positive after subtracting the common excess.
    """
    v = np.asarray(v, dtype=float)
    if v.ndim != 1 or v.size == 0:
        raise ValueError("project_to_simplex: expected a non-empty 1-d array")
    if not np.all(np.isfinite(v)):
        raise ValueError("project_to_simplex: entries must be finite")
    s = np.sort(v)[::-1]
    excess = (np.cumsum(s) - 1.0) / np.arange(1, v.size + 1)
    rho = int(np.nonzero(s > excess)[0][-1])
    return np.maximum(v - excess[rho], 0.0)


def _gibbs(utility: np.ndarray, weights: np.ndarray, beta: float) -> np.ndarray:
    if math.isnan(beta) or beta < 0.0:
        raise ValueError("gibbs tilt: beta must be >= 0")
    if math.isinf(beta):
        y = np.where(utility == utility.max(), weights, 0.0)
    else:
        y = weights * np.exp(beta * (utility - utility.max()))
    y[y < _FLUSH] = 0.0
    total = y.sum()
    if total <= 0.0:
        raise ValueError("gibbs tilt: tilt vanished; reference is too close to the boundary")
    return y / total


@dataclass(frozen=True, eq=False)
class BregmanGenerator:
    """A convex generator F on the simplex, supplied in closed form.

    Kind NEGATIVE_ENTROPY is F(y) = sum_i y_i (log(y_i / base_i) - 1) with
    a strictly positive base measure (uniform unless given); its Bregman
    divergence is the KL divergence, whatever the base.  Kind
    SQUARED_EUCLIDEAN is F(y) = ||y||^2 / 2, whose divergence is half the
    squared distance; it takes no base measure.
    """

    kind: str
    dimension: int
    base: Distribution | None = None

    def __post_init__(self) -> None:
        if self.kind not in _KINDS:
            raise ValueError(f"BregmanGenerator: unknown kind {self.kind!r}")
        if self.dimension < 1:
            raise ValueError("BregmanGenerator: dimension must be positive")
        if self.kind == NEGATIVE_ENTROPY:
            base = self.base if self.base is not None else Distribution.uniform(self.dimension)
            if len(base) != self.dimension:
                raise ValueError("BregmanGenerator: base measure dimension mismatch")
            if np.any(base.probs <= 0.0):
                raise ValueError("BregmanGenerator: base measure must be strictly positive")
            object.__setattr__(self, "base", base)
        elif self.base is not None:
            raise ValueError("BregmanGenerator: squared_euclidean takes no base measure")

    @classmethod
    def negative_entropy(cls, dimension: int, base: Distribution | None = None):
        return cls(NEGATIVE_ENTROPY, dimension, base)

    @classmethod
    def squared_euclidean(cls, dimension: int):
        return cls(SQUARED_EUCLIDEAN, dimension)

    def value(self, y) -> float:
        """F(y)."""
        y = np.asarray(y, dtype=float)
        if self.kind == SQUARED_EUCLIDEAN:
            return float(0.5 * np.dot(y, y))
        mask = y > ZERO_TOL
        ys = y[mask]
        return float(np.sum(ys * (np.log(ys / self.base.probs[mask]) - 1.0)))

    def gradient(self, z) -> np.ndarray:
        """grad F(z); undefined on the boundary for the entropy kind."""
        z = np.asarray(z, dtype=float)
        if self.kind == SQUARED_EUCLIDEAN:
            return z.copy()
        if np.any(z <= ZERO_TOL):
            raise ValueError("BregmanGenerator: entropy gradient undefined on the boundary")
        return np.log(z / self.base.probs)

    def tilt(self, utility, anchor, beta: float) -> np.ndarray:
        """The budget-constrained optimiser's closed form at inverse
        temperature beta, anchored at the given simplex point.

        Entropy kind: the Gibbs tilt of the anchor.  Euclidean kind: the
        simplex projection of anchor + beta * utility.  beta = inf returns
        the limiting face point for either kind.
        """
        u = np.asarray(utility, dtype=float)
        z = anchor.probs if isinstance(anchor, Distribution) else np.asarray(anchor, dtype=float)
        if self.kind == NEGATIVE_ENTROPY:
            return _gibbs(u, z, beta)
        if math.isinf(beta):
            hot = u == u.max()
            y = np.zeros_like(z)
            y[hot] = project_to_simplex(z[hot])
            return y
        return project_to_simplex(z + beta * u)


def bregman_divergence(generator: BregmanGenerator, y, z) -> float:
    """D_F(y, z) = F(y) - F(z) - <grad F(z), y - z>, by the closed forms."""
    yv = y.probs if isinstance(y, Distribution) else np.asarray(y, dtype=float)
    zv = z.probs if isinstance(z, Distribution) else np.asarray(z, dtype=float)
    if yv.size != generator.dimension or zv.size != generator.dimension:
        raise ValueError("bregman_divergence: dimension mismatch")
    grad = generator.gradient(zv)
    gap = generator.value(yv) - generator.value(zv) - float(np.dot(grad, yv - zv))
    # An exact zero beats a -1e-17 artifact when y and z all but coincide.
    return 0.0 if -1e-12 < gap < 0.0 else gap


def gibbs_solution(utility, reference: Distribution, beta: float) -> Distribution:
    """The exponential tilt y_i oc reference_i exp(beta u_i).

    This is the stationary point of the KL-budget problem anchored at the
    reference, and the single-row analogue of the channel row update.
    """
    u = np.asarray(utility, dtype=float)
    if u.ndim != 1 or u.size != len(reference):
        raise ValueError("gibbs_solution: utility and reference length mismatch")
    if not np.all(np.isfinite(u)):
        raise ValueError("gibbs_solution: utility must be finite")
    if np.any(reference.probs <= 0.0):
        raise ValueError("gibbs_solution: reference must be strictly positive")
    return Distribution(_gibbs(u, reference.probs, beta))


@dataclass(frozen=True, eq=False)
class ResourceProblem:
    """A linear payoff on the simplex with a divergence budget around an anchor."""

    utilities: np.ndarray
    generator: BregmanGenerator
    reference: Distribution
    lam: float

    def __post_init__(self) -> None:
        u = np.array(self.utilities, dtype=float)
        if u.ndim != 1 or u.size != self.generator.dimension:
            raise ValueError("ResourceProblem: utilities must match the generator dimension")
        if not np.all(np.isfinite(u)):
            raise ValueError("ResourceProblem: utilities must be finite")
        if len(self.reference) != self.generator.dimension:
            raise ValueError("ResourceProblem: reference dimension mismatch")
        if self.generator.kind == NEGATIVE_ENTROPY and np.any(self.reference.probs <= 0.0):
            raise ValueError("ResourceProblem: entropy anchors must be strictly positive")
        if math.isnan(self.lam) or self.lam < 0.0:
            raise ValueError("ResourceProblem: lam must be >= 0")
        u.flags.writeable = False
        object.__setattr__(self, "utilities", u)


def constrained_value(problem: ResourceProblem, branch: str = "upper") -> ValuePoint:
    """Extremal payoff within the divergence budget.

    Doubles beta until the tilt exhausts the budget, then bisects so the
    achieved divergence meets min(lam, saturation) within DIVERGENCE_TOL.
    The lower branch is solved on the negated payoff and reported against
    the original one.  Budgets at or beyond saturation clamp to the best
    reachable face, carry a note, and report beta = inf to match the
    vanished slope.
    """
    if branch not in ("upper", "lower"):
        raise ValueError("constrained_value: branch must be 'upper' or 'lower'")
    generator, anchor = problem.generator, problem.reference
    signed = problem.utilities if branch == "upper" else -problem.utilities

    def solved(beta: float):
        y = generator.tilt(signed, anchor, beta)
        return y, bregman_divergence(generator, y, anchor.probs)

    def point(y: np.ndarray, divergence: float, beta: float, note: str = "") -> ValuePoint:
        return ValuePoint(lam=problem.lam, value=float(np.dot(problem.utilities, y)),
                          beta=beta, info=divergence, solution=Distribution(y), note=note)

    if problem.lam == 0.0:
        return point(anchor.probs.copy(), 0.0, 0.0)

    y_sat, d_sat = solved(math.inf)
    if problem.lam >= d_sat - 1e-12:
        return point(y_sat, d_sat, math.inf,
                     note="budget meets or exceeds the reachable divergence; clamped")

    scale = max(float(np.max(np.abs(signed))), 1e-12)
    beta_cap = _BETA_CEILING / scale
    hi = 1.0
    y_hi, d_hi = solved(hi)
    while d_hi < problem.lam and hi < beta_cap:
        hi = min(hi * 2.0, beta_cap)
        y_hi, d_hi = solved(hi)
    if d_hi < problem.lam:
        return point(y_hi, d_hi, hi,
                     note="divergence plateau: returned nearest feasible point")
    if abs(d_hi - problem.lam) <= DIVERGENCE_TOL:
        return point(y_hi, d_hi, hi)

    lo = 0.0
    y_best, d_best = anchor.probs.copy(), 0.0
    for _ in range(_MAX_BISECT):
        mid = 0.5 * (lo + hi)
        y, divergence = solved(mid)
        if abs(divergence - problem.lam) <= DIVERGENCE_TOL:
            return point(y, divergence, mid)
        if divergence < problem.lam:
            lo, y_best, d_best = mid, y, divergence
        else:
            hi = mid
    return point(y_best, d_best, lo,
                 note="divergence plateau: returned nearest feasible point")
