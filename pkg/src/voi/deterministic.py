"""Step-shaped frontiers from deterministic decision rules.

Two coarser information budgets than the smooth channel solver admits: the
entropy of the action marginal a pure rule induces (boltzmann_value) and
the log cardinality of the action set a rule actually uses (hartley_value).
Both are solved by exhaustive enumeration.  The resulting frontiers are
step functions of the budget, so points carry beta = inf and record the
budget actually consumed in info.  Together with the smooth solver they
satisfy the chain upper_value >= boltzmann_value >= hartley_value at every
budget, since each feasible set contains the next.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass

import numpy as np

from .decisions import DecisionProblem
from .errors import EnumerationCapError
from .frontier import ValuePoint
from .prob import Channel, Distribution

__all__ = [
    "DEFAULT_ENUM_CAP",
    "FEASIBILITY_SLACK",
    "DeterministicChannel",
    "boltzmann_value",
    "hartley_value",
]

DEFAULT_ENUM_CAP = 10_000_000

# Budget comparisons get this much slack so budgets specified as exact
# logarithms (ln 2, ln 3, ...) admit the rules they are meant to admit.
FEASIBILITY_SLACK = 1e-12

_CHUNK = 65_536


@dataclass(frozen=True)
class DeterministicChannel:
    """A pure decision rule: state a acts with assignment[a]."""

    assignment: tuple[int, ...]
    n_actions: int

    def __post_init__(self) -> None:
        assignment = tuple(int(b) for b in self.assignment)
        if not assignment:
            raise ValueError("DeterministicChannel: empty assignment")
        if any(b < 0 or b >= self.n_actions for b in assignment):
            raise ValueError("DeterministicChannel: action index out of range")
        object.__setattr__(self, "assignment", assignment)

    def as_channel(self) -> Channel:
        return Channel.deterministic(self.assignment, self.n_actions)

    def pushforward(self, prior: Distribution) -> np.ndarray:
        """Action marginal induced by following the rule from the prior."""
        out = np.zeros(self.n_actions)
        np.add.at(out, np.array(self.assignment), prior.probs)
        return out


def _validate(problem: DecisionProblem, lam: float) -> None:
    if math.isnan(lam) or lam < 0.0:
        raise ValueError("deterministic solvers: lam must be >= 0")


def boltzmann_value(problem: DecisionProblem, lam: float,
                    cap: int = DEFAULT_ENUM_CAP) -> ValuePoint:
    """Best pure rule whose action-marginal entropy fits the budget.

    Enumerates every assignment of actions to states (n_actions**n_states
    of them; EnumerationCapError beyond cap), keeps those whose pushforward
    entropy is at most lam + FEASIBILITY_SLACK, and returns the best by
    expected utility.  Ties prefer the lexicographically smallest
    assignment vector.  iterations reports the number of rules inspected.
    """
    _validate(problem, lam)
    n_states, n_actions = problem.n_states, problem.n_actions
    total = n_actions ** n_states
    if total > cap:
        raise EnumerationCapError(
            f"boltzmann_value: {total} assignments exceed the cap of {cap}")
    q = problem.prior.probs
    u = problem.utilities
    # Assignment ids decode most-significant-state-first, so ascending ids
    # enumerate assignment vectors in lexicographic order.
    places = n_actions ** np.arange(n_states - 1, -1, -1, dtype=np.int64)
    state_index = np.arange(n_states)

    best_eu = -math.inf
    best_assignment = None
    best_entropy = 0.0
    for start in range(0, total, _CHUNK):
        ids = np.arange(start, min(start + _CHUNK, total), dtype=np.int64)
        digits = (ids[:, None] // places[None, :]) % n_actions
        eus = np.sum(q[None, :] * u[state_index[None, :], digits], axis=1)
        marginals = np.zeros((ids.size, n_actions))
        np.add.at(marginals,
                  (np.repeat(np.arange(ids.size), n_states), digits.ravel()),
                  np.tile(q, ids.size))
        mask = marginals > 1e-15
        with np.errstate(divide="ignore", invalid="ignore"):
            terms = np.where(mask, marginals * np.log(np.where(mask, marginals, 1.0)), 0.0)
        entropies = -np.sum(terms, axis=1) + 0.0
        candidates = np.where(entropies <= lam + FEASIBILITY_SLACK, eus, -np.inf)
        pick = int(np.argmax(candidates))  # first maximum: smallest id wins ties
        if candidates[pick] > best_eu:
            best_eu = float(candidates[pick])
            best_assignment = tuple(int(b) for b in digits[pick])
            best_entropy = float(entropies[pick])
    # Constant rules cost zero entropy, so a winner always exists.
    rule = DeterministicChannel(best_assignment, n_actions)
    return ValuePoint(lam=lam, value=best_eu, beta=math.inf, info=best_entropy,
                      channel=rule.as_channel(), iterations=total, converged=True)


def hartley_value(problem: DecisionProblem, lam: float,
                  cap: int = DEFAULT_ENUM_CAP) -> ValuePoint:
    """Best pure rule allowed at most floor(exp(lam)) distinct actions.

    Scans action subsets of admissible size, smallest first, scoring each
    by letting every state pick its favourite member; the subset scan is
    equivalent to scanning rules f with log |range f| inside the budget.
    Ties prefer the lexicographically smallest induced assignment.  info
    records the log cardinality of the actions the winner actually uses,
    and iterations the number of subsets inspected.
    """
    _validate(problem, lam)
    n_actions = problem.n_actions
    if lam >= math.log(n_actions):
        k = n_actions
    else:
        k = min(max(int(math.floor(math.exp(lam + FEASIBILITY_SLACK))), 1), n_actions)
    total = sum(math.comb(n_actions, size) for size in range(1, k + 1))
    if total > cap:
        raise EnumerationCapError(
            f"hartley_value: {total} subsets exceed the cap of {cap}")
    q = problem.prior.probs
    u = problem.utilities

    best_value = -math.inf
    best_assignment = None
    for size in range(1, k + 1):
        for subset in itertools.combinations(range(n_actions), size):
            cols = np.array(subset)
            restricted = u[:, cols]
            value = float(q @ restricted.max(axis=1))
            if value > best_value:
                best_value = value
                best_assignment = tuple(int(b) for b in cols[np.argmax(restricted, axis=1)])
            elif value == best_value:
                assignment = tuple(int(b) for b in cols[np.argmax(restricted, axis=1)])
                if assignment < best_assignment:
                    best_assignment = assignment
    used = len(set(best_assignment))
    rule = DeterministicChannel(best_assignment, n_actions)
    return ValuePoint(lam=lam, value=best_value, beta=math.inf, info=math.log(used),
                      channel=rule.as_channel(), iterations=total, converged=True)
