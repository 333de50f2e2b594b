"""Smooth value-of-information frontier for channels under an information
budget.

upper_value(problem, lam) solves

    maximise   sum_ab Q(a) P(b|a) u(a,b)
    over       row-stochastic P
    subject to I(A;B) <= lam,

and lower_value solves the minimising twin by reflecting payoffs.  The
workhorse is an alternating tilt/marginal iteration at fixed inverse
temperature beta, wrapped in a scalar bisection that lands the achieved
information on the requested budget.  The tilted objective EU - I/beta is
concave in the channel, so the alternating scheme converges to its global
optimum and the frontier inherits the usual shape guarantees: concave and
non-decreasing upper branch, convex and non-increasing lower branch, with
beta recoverable as the reciprocal slope.
"""

from __future__ import annotations

import math
from dataclasses import replace

import numpy as np

from .decisions import DecisionProblem, joint_expected_utility
from .frontier import BRANCHES, ValuePoint, ValueCurve
from .prob import Channel, mutual_information

__all__ = [
    "LAGRANGIAN_TOL",
    "LAMBDA_TOL",
    "MAX_ITERATIONS",
    "ba_fixed_beta",
    "upper_value",
    "lower_value",
    "trace_curve",
]

# Fixed-beta iterations stop once the Lagrangian EU - I/beta moves by less
# than this and the channel itself has settled.
LAGRANGIAN_TOL = 1e-12
MAX_ITERATIONS = 10_000

# Contracted accuracy for |achieved information - requested budget|.
LAMBDA_TOL = 1e-6
# The bisection aims far tighter than the contract so that downstream
# curvature certificates are not polluted by abscissa error.
_BISECT_TOL = 1e-9
_MAX_BISECT = 200

# Probabilities this small are flushed to exact zeros before renormalising.
_FLUSH = 1e-300
_BETA_CEILING = 2.0 ** 60
_SETTLE_TOL = 1e-13
# Warm starts for the dual search are floored here so an action that died
# at one inverse temperature can revive at a smaller one.
_WARM_FLOOR = 1e-10
# Once the beta bracket is this tight the dual search cannot move the
# achieved information any further; any residual gap is a genuine jump.
_BRACKET_TOL = 1e-13


def _frontier_stats(q: np.ndarray, rows: np.ndarray, u: np.ndarray):
    """Expected utility and information of a channel, on raw arrays."""
    marginal = q @ rows
    joint = q[:, None] * rows
    with np.errstate(divide="ignore", invalid="ignore"):
        logs = np.where(joint > 1e-15, np.log(rows) - np.log(marginal)[None, :], 0.0)
    info = float(np.sum(joint * logs))
    eu = float(np.sum(joint * u))
    return eu, max(info, 0.0)


def _finish(problem: DecisionProblem, rows: np.ndarray, beta: float,
            iterations: int, converged: bool, note: str = "") -> ValuePoint:
    channel = Channel(rows)
    info = mutual_information(problem.prior, channel)
    value = joint_expected_utility(problem, channel)
    return ValuePoint(lam=info, value=value, beta=beta, info=info, channel=channel,
                      iterations=iterations, converged=converged, note=note)


def _zero_information_point(problem: DecisionProblem) -> ValuePoint:
    # Zero tilt admits only constant-action optima; pick the best exactly.
    best = int(np.argmax(problem.action_values()))
    rows = np.zeros((problem.n_states, problem.n_actions))
    rows[:, best] = 1.0
    return _finish(problem, rows, 0.0, 0, True)


def _full_information_point(problem: DecisionProblem) -> ValuePoint:
    # Pointwise argmax rows, first index on ties.
    best = np.argmax(problem.utilities, axis=1)
    rows = np.zeros((problem.n_states, problem.n_actions))
    rows[np.arange(problem.n_states), best] = 1.0
    return _finish(problem, rows, math.inf, 0, True)


def _mix_to_budget(problem: DecisionProblem, low: ValuePoint, high: ValuePoint,
                   lam: float) -> ValuePoint | None:
    """Blend two channels bracketing the budget until the blend hits it.

    Information is convex along the segment and crosses lam exactly once,
    so a scalar bisection on the blend weight suffices.
    """
    lo_rows = low.channel.rows
    hi_rows = high.channel.rows
    t_lo, t_hi = 0.0, 1.0
    for _ in range(100):
        t = 0.5 * (t_lo + t_hi)
        rows = (1.0 - t) * lo_rows + t * hi_rows
        info = mutual_information(problem.prior, Channel(rows))
        if abs(info - lam) <= _BISECT_TOL:
            return _finish(problem, rows, high.beta, 0, True)
        if info < lam:
            t_lo = t
        else:
            t_hi = t
    return None


def ba_fixed_beta(problem: DecisionProblem, beta: float,
                  max_iterations: int = MAX_ITERATIONS,
                  start_marginal: np.ndarray | None = None) -> ValuePoint:
    """Solve the tilted problem max EU - I/beta at a fixed beta >= 0.

    Alternates the closed-form row update P(b|a) oc P(b) exp(beta u(a,b))
    with the marginal update P(b) <- sum_a Q(a) P(b|a), starting from the
    uniform marginal, until the Lagrangian moves by less than
    LAGRANGIAN_TOL and the channel has settled (or max_iterations runs
    out, which clears the converged flag).  beta = 0 and beta = inf
    short-circuit to the exact endpoint optima.

    start_marginal replaces the uniform start with another strictly
    positive one; the fixed point does not depend on it, only the path
    there does, which is what the dual search exploits to warm-start.
    The returned point carries the achieved pair: lam is set to the
    information actually consumed.
    """
    if math.isnan(beta) or beta < 0.0:
        raise ValueError("ba_fixed_beta: beta must be >= 0")
    if max_iterations < 1:
        raise ValueError("ba_fixed_beta: max_iterations must be positive")
    if beta == 0.0:
        return _zero_information_point(problem)
    if math.isinf(beta):
        return _full_information_point(problem)

    q = problem.prior.probs
    u = problem.utilities
    logits = beta * u
    logits -= logits.max(axis=1, keepdims=True)  # overflow guard
    tilt = np.exp(logits)

    if start_marginal is None:
        marginal = np.full(problem.n_actions, 1.0 / problem.n_actions)
    else:
        marginal = np.maximum(np.asarray(start_marginal, dtype=float), _WARM_FLOOR)
        marginal = marginal / marginal.sum()
    rows = tilt
    lagrangian = None
    converged = False
    settled = False
    iterations = 0
    for iterations in range(1, max_iterations + 1):
        rows = marginal[None, :] * tilt
        sums = rows.sum(axis=1, keepdims=True)
        if np.any(sums == 0.0):
            # Only states starved by a vanishing marginal land here; their
            # bare tilt is a valid row and they carry no joint mass anyway.
            dead = sums[:, 0] == 0.0
            rows[dead] = tilt[dead]
            sums = rows.sum(axis=1, keepdims=True)
        rows /= sums
        updated_marginal = q @ rows
        delta = float(np.max(np.abs(updated_marginal - marginal)))
        marginal = updated_marginal
        if settled:
            # The channel has stopped moving; confirm on the contracted
            # criterion, which needs two consecutive Lagrangian values.
            eu, info = _frontier_stats(q, rows, u)
            updated = eu - info / beta
            if lagrangian is not None and abs(updated - lagrangian) < LAGRANGIAN_TOL:
                converged = True
                break
            lagrangian = updated
        if delta < _SETTLE_TOL:
            settled = True
        else:
            settled = False
            lagrangian = None
    rows[rows < _FLUSH] = 0.0
    return _finish(problem, rows, beta, iterations, converged)


def upper_value(problem: DecisionProblem, lam: float,
                max_iterations: int = MAX_ITERATIONS) -> ValuePoint:
    """Best expected utility achievable with at most lam nats of information.

    The achieved information lands within LAMBDA_TOL of min(lam, lam_max);
    the endpoints are computed exactly rather than iterated, so a zero
    budget returns the best constant action and any budget at or past
    saturation returns the clamped full-information optimum.  iterations
    aggregates every fixed-beta solve spent on the answer.
    """
    if math.isnan(lam) or lam < 0.0:
        raise ValueError("upper_value: lam must be >= 0")
    if lam == 0.0:
        return _zero_information_point(problem)
    full = _full_information_point(problem)
    if lam >= full.info - 1e-12:
        return replace(full, lam=lam)

    scale = max(float(np.max(np.abs(problem.utilities))), 1e-12)
    beta_cap = _BETA_CEILING / scale
    total_iterations = 0
    q = problem.prior.probs

    def output_marginal(point: ValuePoint) -> np.ndarray:
        return q @ point.channel.rows

    beta_hi = 1.0
    high = ba_fixed_beta(problem, beta_hi, max_iterations)
    total_iterations += high.iterations
    warm = output_marginal(high)
    while high.info < lam and beta_hi < beta_cap:
        beta_hi = min(beta_hi * 2.0, beta_cap)
        high = ba_fixed_beta(problem, beta_hi, max_iterations, warm)
        total_iterations += high.iterations
        warm = output_marginal(high)
    if high.info < lam:
        # Ties let expected utility saturate while information stalls; the
        # cap point already spends every useful nat.
        return replace(high, lam=lam, iterations=total_iterations,
                       note="information saturates below the requested budget")

    if abs(high.info - lam) <= _BISECT_TOL:
        return replace(high, lam=lam, iterations=total_iterations)

    # Illinois-damped false position on beta -> achieved information.  The
    # map is non-decreasing but may jump, so a bracket is kept at all times
    # and the search stops once it is too tight to matter.
    low_beta, high_beta = 0.0, beta_hi
    f_low, f_high = -lam, high.info - lam
    feasible = _zero_information_point(problem)
    infeasible = high
    side = 0
    for _ in range(_MAX_BISECT):
        if high_beta - low_beta <= _BRACKET_TOL * max(1.0, high_beta):
            break
        mid = (low_beta * f_high - high_beta * f_low) / (f_high - f_low)
        if not low_beta < mid < high_beta:
            mid = 0.5 * (low_beta + high_beta)
        point = ba_fixed_beta(problem, mid, max_iterations, warm)
        total_iterations += point.iterations
        warm = output_marginal(point)
        if abs(point.info - lam) <= _BISECT_TOL:
            return replace(point, lam=lam, iterations=total_iterations)
        if point.info < lam:
            low_beta, f_low, feasible = mid, point.info - lam, point
            if side == -1:
                f_high *= 0.5
            side = -1
        else:
            high_beta, f_high, infeasible = mid, point.info - lam, point
            if side == 1:
                f_low *= 0.5
            side = 1
    if feasible.beta > 0.0:
        # The budget fell inside an information jump.  At the transition the
        # Lagrangian optimum is degenerate and every mixture of the two
        # bracketing channels is optimal too, with information moving
        # linearly along the segment, so a mixture can land on the budget.
        mixed = _mix_to_budget(problem, feasible, infeasible, lam)
        if mixed is not None:
            return replace(mixed, lam=lam, iterations=total_iterations)
    # No valid second endpoint to mix with; the nearest feasible point is
    # the best answer on this side of the gap.
    return replace(feasible, lam=lam, iterations=total_iterations,
                   note="information plateau: returned nearest feasible point")


def lower_value(problem: DecisionProblem, lam: float,
                max_iterations: int = MAX_ITERATIONS) -> ValuePoint:
    """Worst expected utility forcible with at most lam nats.

    Exactly the reflected twin of upper_value: solved on the payoff-negated
    problem and sign-flipped, so the two branches agree bit for bit under
    reflection.
    """
    point = upper_value(problem.negated(), lam, max_iterations)
    return replace(point, value=-point.value)


def trace_curve(problem: DecisionProblem, branch: str, lambdas,
                max_iterations: int = MAX_ITERATIONS) -> ValueCurve:
    """Solve one branch over a grid of budgets.

    The grid must hold at least two strictly increasing, non-negative,
    finite budgets.  Budgets past saturation come back clamped, so the
    tail of the curve goes flat rather than extrapolating.
    """
    grid = np.asarray(lambdas, dtype=float)
    if grid.ndim != 1 or grid.size < 2:
        raise ValueError("trace_curve: need at least two grid points")
    if not np.all(np.isfinite(grid)) or grid[0] < 0.0 or np.any(np.diff(grid) <= 0.0):
        raise ValueError("trace_curve: grid must be non-negative and strictly increasing")
    if branch not in BRANCHES:
        raise ValueError(f"trace_curve: branch must be one of {BRANCHES}")
    solve = upper_value if branch == "upper" else lower_value
    points = tuple(solve(problem, float(g), max_iterations) for g in grid)
    return ValueCurve(points=points, branch=branch, problem=problem)
