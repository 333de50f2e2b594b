"""Brute-force reference values for validating the solvers.

Every function here recomputes its target quantity from scratch: different
formulas where an identity allows it (information via H(A) + H(B) - H(AB)
instead of the log-ratio sum), plain Python accumulation instead of the
solvers' vectorised paths, and no calls into the modules under test.  They
are deliberately slow and deliberately small: each one is restricted to
the dimensions where an exhaustive scan is exact enough to arbitrate.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field

import numpy as np

from .bregman import NEGATIVE_ENTROPY, ResourceProblem
from .decisions import DecisionProblem
from .deterministic import DEFAULT_ENUM_CAP
from .errors import EnumerationCapError

__all__ = [
    "OracleReport",
    "grid_max_eu",
    "exhaustive_deterministic",
    "simplex_grid_value",
    "variational_entropy_check",
    "write_reports_csv",
]

# Constraint boundaries are inclusive; the slack absorbs representation
# error in grid coordinates that land exactly on the boundary.
_BOUNDARY_SLACK = 1e-12

_CSV_HEADER = "target,oracle_value,solver_value,abs_diff,resolution,elapsed"


@dataclass(frozen=True)
class OracleReport:
    """One solver-versus-oracle comparison row."""

    target: str
    oracle_value: float
    solver_value: float
    resolution: int
    elapsed: float
    abs_diff: float = field(init=False)

    def __post_init__(self) -> None:
        object.__setattr__(self, "abs_diff", abs(self.oracle_value - self.solver_value))

    def csv_row(self) -> str:
        return ",".join([
            self.target,
            repr(self.oracle_value),
            repr(self.solver_value),
            repr(self.abs_diff),
            str(self.resolution),
            repr(self.elapsed),
        ])


def write_reports_csv(reports, stream) -> None:
    stream.write(_CSV_HEADER + "\n")
    for report in reports:
        stream.write(report.csv_row() + "\n")


def _plogp(t: np.ndarray) -> np.ndarray:
    """Elementwise -t ln t with 0 ln 0 = 0, for t in [0,1]."""
    mask = t > 1e-15
    with np.errstate(divide="ignore", invalid="ignore"):
        terms = np.where(mask, -t * np.log(np.where(mask, t, 1.0)), 0.0)
    return terms


def grid_max_eu(problem: DecisionProblem, lam: float, resolution: int) -> float:
    """Best expected utility over an exhaustive 2x2 channel grid.

    Scans P(b1|a1) and P(b1|a2) over a resolution x resolution lattice,
    keeps points whose information (computed as output entropy minus mean
    row entropy, a different decomposition than the solver uses) stays
    within the budget, and takes the best payoff.  Error against the true
    frontier is O(1/resolution).
    """
    if problem.n_states != 2 or problem.n_actions != 2:
        raise ValueError("grid_max_eu: oracle supports 2-state, 2-action problems only")
    if resolution < 10:
        raise ValueError("grid_max_eu: resolution must be >= 10")
    if math.isnan(lam) or lam < 0.0:
        raise ValueError("grid_max_eu: lam must be >= 0")

    q0, q1 = (float(v) for v in problem.prior.probs)
    u = problem.utilities
    ticks = np.linspace(0.0, 1.0, resolution)
    y = ticks[np.newaxis, :]
    h_y = _plogp(y) + _plogp(1.0 - y)

    best = -math.inf
    chunk = 512
    for start in range(0, resolution, chunk):
        x = ticks[start:start + chunk][:, np.newaxis]
        m = q0 * x + q1 * y
        info = (_plogp(m) + _plogp(1.0 - m)) - (q0 * (_plogp(x) + _plogp(1.0 - x)) + q1 * h_y)
        eu = (q0 * (x * u[0, 0] + (1.0 - x) * u[0, 1])
              + q1 * (y * u[1, 0] + (1.0 - y) * u[1, 1]))
        feasible = info <= lam + _BOUNDARY_SLACK
        if np.any(feasible):
            best = max(best, float(eu[feasible].max()))
    return best


@dataclass(frozen=True)
class DeterministicRow:
    """One line of the full deterministic-channel table."""

    assignment: tuple
    entropy: float
    ln_cardinality: float
    eu: float


def exhaustive_deterministic(problem: DecisionProblem, cap: int = DEFAULT_ENUM_CAP):
    """The complete table of deterministic channels.

    One row per function from states to actions, in lexicographic order,
    each carrying the pushforward entropy, the log of the number of
    distinct actions used, and the expected utility.  Built with plain
    Python loops and compensated summation so it shares nothing with the
    enumeration solver it checks.
    """
    n_states, n_actions = problem.n_states, problem.n_actions
    total = n_actions ** n_states
    if total > cap:
        raise EnumerationCapError(
            f"exhaustive_deterministic: {n_actions}^{n_states} = {total} rows "
            f"exceeds the cap of {cap}")

    q = [float(v) for v in problem.prior.probs]
    u = problem.utilities
    rows = []
    for assignment in itertools.product(range(n_actions), repeat=n_states):
        mass = [0.0] * n_actions
        for a, b in enumerate(assignment):
            mass[b] += q[a]
        ent = -math.fsum(p * math.log(p) for p in mass if p > 1e-15) + 0.0
        eu = math.fsum(q[a] * float(u[a, b]) for a, b in enumerate(assignment))
        rows.append(DeterministicRow(assignment, ent, math.log(len(set(assignment))), eu))
    return rows


def _independent_divergence(rp: ResourceProblem, y: np.ndarray) -> np.ndarray:
    """Divergence of each grid row from the anchor, by the closed forms
    (log-ratio sum, half squared distance) rather than the generic
    generator expansion the solver uses."""
    z = rp.reference.probs
    if rp.generator.kind == NEGATIVE_ENTROPY:
        mask = y > 1e-15
        with np.errstate(divide="ignore", invalid="ignore"):
            terms = np.where(mask, y * np.log(np.where(mask, y, 1.0) / z), 0.0)
        return terms.sum(axis=1)
    return 0.5 * ((y - z) ** 2).sum(axis=1)


def _lattice(dim: int, lo: np.ndarray, hi: np.ndarray, resolution: int) -> np.ndarray:
    """Points of the simplex with the first dim-1 coordinates on a box grid."""
    axes = [np.linspace(lo[k], hi[k], resolution + 1) for k in range(dim - 1)]
    if dim == 2:
        head = axes[0][:, np.newaxis]
    else:
        a, b = np.meshgrid(axes[0], axes[1], indexing="ij")
        head = np.column_stack([a.ravel(), b.ravel()])
    last = 1.0 - head.sum(axis=1)
    keep = last >= -_BOUNDARY_SLACK
    y = np.column_stack([head[keep], np.maximum(last[keep], 0.0)])
    return y


# How many coarse candidates get a refinement pass.  The optimum hugs a
# curved feasibility boundary, so the best lattice point can sit several
# cells away from it along the arc; refining around the whole leading pack
# keeps the cell next to the optimum in play.
_REFINE_CANDIDATES = 16


def simplex_grid_value(rp: ResourceProblem, branch: str, resolution: int) -> float:
    """Extremal payoff over a barycentric lattice of the feasible region.

    Dimension 2 or 3 only.  Two passes: a lattice over the whole simplex,
    then the same lattice squeezed into the cell neighbourhoods of the
    leading feasible candidates, which pushes the discretisation error to
    O(1/resolution^2).  The anchor itself is always a candidate so that a
    zero budget has a feasible point even when the anchor falls between
    lattice lines.
    """
    if branch not in ("upper", "lower"):
        raise ValueError("simplex_grid_value: branch must be 'upper' or 'lower'")
    if resolution < 10:
        raise ValueError("simplex_grid_value: resolution must be >= 10")
    dim = rp.generator.dimension
    if dim not in (2, 3):
        raise ValueError("simplex_grid_value: oracle supports dimensions 2 and 3 only")
    sign = 1.0 if branch == "upper" else -1.0

    def feasible_scores(y: np.ndarray) -> np.ndarray:
        feasible = _independent_divergence(rp, y) <= rp.lam + _BOUNDARY_SLACK
        return np.where(feasible, (y @ rp.utilities) * sign, -math.inf)

    zeros, ones = np.zeros(dim - 1), np.ones(dim - 1)
    coarse = np.vstack([_lattice(dim, zeros, ones, resolution), rp.reference.probs])
    scores = feasible_scores(coarse)
    order = np.argsort(scores)[::-1][:_REFINE_CANDIDATES]
    best = float(scores[order[0]])
    step = 1.0 / resolution
    for idx in order:
        if not math.isfinite(scores[idx]):
            break
        head = coarse[idx][:dim - 1]
        lo = np.clip(head - step, 0.0, 1.0)
        hi = np.clip(head + step, 0.0, 1.0)
        local = feasible_scores(_lattice(dim, lo, hi, resolution))
        best = max(best, float(local.max()))
    return sign * best


def variational_entropy_check(p, resolution: int) -> float:
    """Entropy recovered as the best information any channel can carry.

    Maximises I(A;B) over binary-output joints with the given marginal on
    a lattice of conditionals, evaluating information as
    H(A) + H(B) - H(A,B).  The lattice corners include the identity
    coupling, so the maximum lands on entropy(p) up to rounding.
    """
    probs = p.probs if hasattr(p, "probs") else np.asarray(p, dtype=float)
    if probs.size > 2:
        raise ValueError("variational_entropy_check: oracle supports dimension <= 2 only")
    if resolution < 100:
        raise ValueError("variational_entropy_check: resolution must be >= 100")
    if probs.size == 1:
        return 0.0

    q0, q1 = float(probs[0]), float(probs[1])
    ticks = np.linspace(0.0, 1.0, resolution)
    t0 = ticks[:, np.newaxis]
    t1 = ticks[np.newaxis, :]

    joint = (_plogp(q0 * t0) + _plogp(q0 * (1.0 - t0))
             + _plogp(q1 * t1) + _plogp(q1 * (1.0 - t1)))
    m = q0 * t0 + q1 * t1
    h_b = _plogp(m) + _plogp(1.0 - m)
    h_a = float(_plogp(np.asarray(q0)) + _plogp(np.asarray(q1)))
    info = h_a + h_b - joint
    return float(info.max())
