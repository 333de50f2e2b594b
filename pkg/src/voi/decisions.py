"""Decision problems, lotteries, and the classic expected-utility stress cases.

The fixture catalogue collects the standard situations where the mean payoff
alone is a poor guide: equal-mean lotteries with wildly different stakes,
composition ambiguity, truncated doubling games and their mirrored losses.
Each fixture pins exact numbers so solvers and reports can be checked
against them.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass

import numpy as np

from .prob import Channel, Distribution

__all__ = [
    "INDIFFERENCE_TOL",
    "Lottery",
    "DecisionProblem",
    "Preference",
    "ParadoxFixture",
    "expected_utility",
    "joint_expected_utility",
    "eu_compare",
    "paradox",
    "PARADOX_NAMES",
]

# Expected-utility gaps at most this large count as indifference.
INDIFFERENCE_TOL = 1e-9


@dataclass(frozen=True, eq=False)
class Lottery:
    """A distribution over outcomes paired with the payoff of each outcome."""

    dist: Distribution
    payoffs: np.ndarray

    def __post_init__(self) -> None:
        pay = np.array(self.payoffs, dtype=float)
        if pay.ndim != 1 or pay.size != len(self.dist):
            raise ValueError("Lottery: payoffs must match the outcome count")
        if not np.all(np.isfinite(pay)):
            raise ValueError("Lottery: payoffs must be finite")
        pay.flags.writeable = False
        object.__setattr__(self, "payoffs", pay)

    def negated(self) -> "Lottery":
        """Mirror lottery: identical chances, every payoff times -1."""
        return Lottery(self.dist, -self.payoffs)


@dataclass(frozen=True, eq=False)
class DecisionProblem:
    """States with a prior, actions, and a state-action payoff table."""

    prior: Distribution
    utilities: np.ndarray
    name: str = ""
    action_labels: tuple[str, ...] | None = None

    def __post_init__(self) -> None:
        u = np.array(self.utilities, dtype=float)
        if u.ndim != 2 or u.shape[0] != len(self.prior) or u.shape[1] < 1:
            raise ValueError("DecisionProblem: utilities must be (n_states, n_actions)")
        if not np.all(np.isfinite(u)):
            raise ValueError("DecisionProblem: utilities must be finite")
        u.flags.writeable = False
        object.__setattr__(self, "utilities", u)
        if self.action_labels is not None:
            labels = tuple(str(s) for s in self.action_labels)
            if len(labels) != u.shape[1]:
                raise ValueError("DecisionProblem: action label count mismatch")
            object.__setattr__(self, "action_labels", labels)

    @property
    def n_states(self) -> int:
        return int(self.utilities.shape[0])

    @property
    def n_actions(self) -> int:
        return int(self.utilities.shape[1])

    def negated(self) -> "DecisionProblem":
        """The reflected problem with payoff table -u."""
        return DecisionProblem(self.prior, -self.utilities, self.name, self.action_labels)

    def action_values(self) -> np.ndarray:
        """Expected payoff of each constant action under the prior."""
        return self.prior.probs @ self.utilities

    def best_constant_value(self) -> float:
        return float(self.action_values().max())

    def full_information_value(self) -> float:
        """Expected payoff when the action may depend freely on the state."""
        return float(self.prior.probs @ self.utilities.max(axis=1))


def expected_utility(lottery: Lottery) -> float:
    return float(lottery.dist.probs @ lottery.payoffs)


def joint_expected_utility(problem: DecisionProblem, channel: Channel) -> float:
    """Mean payoff of acting through the channel: sum_ab Q(a) P(b|a) u(a,b)."""
    if channel.n_inputs != problem.n_states or channel.n_outputs != problem.n_actions:
        raise ValueError("joint_expected_utility: channel shape mismatch")
    return float(np.sum(problem.prior.probs[:, None] * channel.rows * problem.utilities))


class Preference(enum.Enum):
    LESS = "less"
    INDIFFERENT = "indifferent"
    GREATER = "greater"


def eu_compare(a: Lottery, b: Lottery, tol: float = INDIFFERENCE_TOL) -> Preference:
    """Order two lotteries by expected utility, ties going to indifference."""
    gap = expected_utility(a) - expected_utility(b)
    if abs(gap) <= tol:
        return Preference.INDIFFERENT
    return Preference.GREATER if gap > 0.0 else Preference.LESS


@dataclass(frozen=True)
class ParadoxFixture:
    """A named bundle of lotteries that stresses mean-value reasoning.

    lotteries holds (label, lottery) pairs in display order.  family is
    only populated for fixtures built from a parametric family of urns.
    """

    name: str
    lotteries: tuple[tuple[str, Lottery], ...]
    notes: str = ""
    family: tuple[Lottery, ...] = ()

    def lottery(self, label: str) -> Lottery:
        for key, lot in self.lotteries:
            if key == label:
                return lot
        raise KeyError(label)


def _example_variance() -> ParadoxFixture:
    payoffs = np.array([-1000.0, -1.0, 1.0, 1000.0])
    modest = Lottery(Distribution([0.0, 0.5, 0.5, 0.0]), payoffs)
    extreme = Lottery(Distribution([0.5, 0.0, 0.0, 0.5]), payoffs)
    notes = "Both lotteries have mean zero; only the stakes differ by three orders."
    return ParadoxFixture("example1_variance", (("P", modest), ("Q", extreme)), notes)


def _ellsberg(family_size: int) -> ParadoxFixture:
    if family_size < 2:
        raise ValueError("paradox: ellsberg family needs at least two members")
    payoffs = np.array([100.0, 0.0])
    known = Lottery(Distribution([0.5, 0.5]), payoffs)
    # Averaging the unknown urn uniformly over its composition t gives the
    # same marginal, so the mean payoff is exactly 50 for both.
    unknown = Lottery(Distribution([0.5, 0.5]), payoffs)
    ts = np.linspace(0.0, 1.0, family_size)
    family = tuple(Lottery(Distribution([t, 1.0 - t]), payoffs) for t in ts)
    notes = (
        "Known 50/50 urn versus an urn of unknown composition t, uniform over"
        " [0, 1]; the family holds the discretised compositions."
    )
    return ParadoxFixture("ellsberg", (("P", known), ("Q", unknown)), notes, family=family)


def _st_petersburg(n: int) -> ParadoxFixture:
    if n < 1:
        raise ValueError("paradox: truncation must be at least 1")
    k = np.arange(1, n + 1, dtype=float)
    norm = 1.0 - 2.0 ** (-float(n))
    lot = Lottery(Distribution(2.0 ** (-k) / norm), 2.0 ** k)
    notes = "Doubling game truncated at n tosses; the mean n/(1 - 2^-n) is unbounded in n."
    return ParadoxFixture("st_petersburg", (("P", lot),), notes)


def _northern_rock(n: int) -> ParadoxFixture:
    base = _st_petersburg(n).lottery("P")
    notes = "The truncated doubling game as seen by its counterparty: unboundedly bad."
    return ParadoxFixture("northern_rock", (("P", base.negated()),), notes)


def _allais(sign: float) -> ParadoxFixture:
    risky = Lottery(Distribution([1.0 / 3.0, 2.0 / 3.0]), sign * np.array([300.0, 0.0]))
    sure = Lottery(Distribution([1.0]), sign * np.array([100.0]))
    if sign > 0:
        name, framing = "allais_gain", "a certain 100"
    else:
        name, framing = "allais_loss", "a certain -100"
    notes = (
        f"One-in-three shot at {300.0 * sign:g} against {framing}: equal means,"
        " yet stated choices flip between the two framings."
    )
    return ParadoxFixture(name, (("P", risky), ("Q", sure)), notes)


PARADOX_NAMES = (
    "example1_variance",
    "ellsberg",
    "st_petersburg",
    "northern_rock",
    "allais_gain",
    "allais_loss",
)


def paradox(name: str, n: int = 20, family_size: int = 101) -> ParadoxFixture:
    """Fetch a catalogued fixture by name.

    n truncates the open-ended doubling games; family_size controls the
    discretised composition family attached to the ambiguity fixture.
    """
    if name == "example1_variance":
        return _example_variance()
    if name == "ellsberg":
        return _ellsberg(family_size)
    if name == "st_petersburg":
        return _st_petersburg(n)
    if name == "northern_rock":
        return _northern_rock(n)
    if name == "allais_gain":
        return _allais(1.0)
    if name == "allais_loss":
        return _allais(-1.0)
    raise ValueError(f"paradox: unknown name {name!r}; expected one of {PARADOX_NAMES}")
