"""Acts, lotteries, menus and the regret-based decision rules.

An act maps every state to a finite-support lottery over prizes; a utility
table turns lotteries into exact expected utilities.  Regret of an act in a
state is the gap to the best utility any menu act achieves there, which
makes every regret-family score menu-dependent.  Five rules are provided:

  seu    expected utility under a single measure            (maximize)
  mmeu   worst-case expected utility over a set             (maximize)
  regret worst-case regret over states, no probabilities    (minimize)
  mer    worst-case expected regret over a set of measures  (minimize)
  mwer   worst case of weight-scaled expected regrets       (minimize)

The regret-family implementations are deliberately independent of each
other: their degeneration identities (all-weights-one, singleton belief,
full simplex) are verified by tests rather than shared code.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Iterable, Mapping, Sequence, Union

from .errors import ActNotInMenu, BeliefKindMismatch, DimensionMismatch, UnknownPrize
from .measures import Measure, WeightedMeasureSet
from .rational import format_decimal, format_rational

Rational = Union[Fraction, int, str]

ZERO = Fraction(0)
ONE = Fraction(1)

RULES = ("seu", "mmeu", "regret", "mer", "mwer")
REGRET_RULES = ("regret", "mer", "mwer")


class UtilitySpec:
    """Utility table over prizes; needs at least two distinct values."""

    __slots__ = ("_utils",)

    def __init__(self, prize_utils: Mapping[str, Rational]):
        utils = {prize: Fraction(v) for prize, v in prize_utils.items()}
        if len(set(utils.values())) < 2:
            raise ValueError("a utility table needs two prizes with distinct utilities")
        self._utils = utils

    @property
    def prizes(self) -> tuple[str, ...]:
        return tuple(sorted(self._utils))

    def __getitem__(self, prize: str) -> Fraction:
        try:
            return self._utils[prize]
        except KeyError:
            raise UnknownPrize(f"no utility assigned to prize {prize!r}") from None

    def items(self) -> tuple[tuple[str, Fraction], ...]:
        return tuple(sorted(self._utils.items()))

    def utility(self, lottery: "Lottery") -> Fraction:
        return sum((p * self[prize] for prize, p in lottery.items()), ZERO)

    def rescaled(self, scale: Rational, shift: Rational) -> "UtilitySpec":
        scale = Fraction(scale)
        shift = Fraction(shift)
        return UtilitySpec({prize: scale * v + shift for prize, v in self._utils.items()})

    def extended(self, extra: Mapping[str, Rational]) -> "UtilitySpec":
        merged = dict(self._utils)
        for prize, v in extra.items():
            merged[prize] = Fraction(v)
        return UtilitySpec(merged)


class Lottery:
    """A finite-support probability over prizes."""

    __slots__ = ("_probs", "_items")

    def __init__(self, probs: Mapping[str, Rational]):
        converted = {prize: Fraction(p) for prize, p in probs.items() if Fraction(p) != 0}
        for prize, p in converted.items():
            if p < 0:
                raise ValueError(f"negative probability {p} for prize {prize!r}")
        if sum(converted.values(), ZERO) != 1:
            total = sum((Fraction(p) for p in probs.values()), ZERO)
            raise ValueError(f"lottery probabilities sum to {format_rational(total)}")
        self._probs = converted
        self._items = tuple(sorted(converted.items()))

    def items(self) -> tuple[tuple[str, Fraction], ...]:
        return self._items

    def mix(self, weight: Rational, other: "Lottery") -> "Lottery":
        weight = Fraction(weight)
        probs: dict[str, Fraction] = {}
        for prize, p in self._items:
            probs[prize] = weight * p
        for prize, p in other._items:
            probs[prize] = probs.get(prize, ZERO) + (1 - weight) * p
        return Lottery(probs)

    def __eq__(self, other: object) -> bool:
        return isinstance(other, Lottery) and self._items == other._items

    def __hash__(self) -> int:
        return hash(self._items)

    def __repr__(self) -> str:
        inner = ", ".join(f"{prize}: {format_rational(p)}" for prize, p in self._items)
        return f"Lottery({{{inner}}})"


def sure(prize: str) -> Lottery:
    """The degenerate lottery on one prize."""
    return Lottery({prize: 1})


class Act:
    """A named assignment of one lottery to every state."""

    __slots__ = ("name", "_outcomes", "_items", "_profiles")

    def __init__(self, name: str, outcomes: Mapping[str, Lottery]):
        if not name:
            raise ValueError("acts need a nonempty name")
        self.name = name
        self._outcomes = dict(outcomes)
        self._items = tuple(sorted(self._outcomes.items(), key=lambda kv: kv[0]))
        self._profiles: dict[UtilitySpec, dict[str, Fraction]] = {}

    @property
    def state_space(self) -> tuple[str, ...]:
        return tuple(state for state, _ in self._items)

    def __getitem__(self, state: str) -> Lottery:
        return self._outcomes[state]

    def items(self) -> tuple[tuple[str, Lottery], ...]:
        return self._items

    def utility_profile(self, u: UtilitySpec) -> dict[str, Fraction]:
        cached = self._profiles.get(u)
        if cached is None:
            cached = {state: u.utility(lottery) for state, lottery in self._items}
            self._profiles[u] = cached
        return cached

    def renamed(self, name: str) -> "Act":
        return Act(name, self._outcomes)

    def is_constant(self) -> bool:
        lotteries = {lottery for _, lottery in self._items}
        return len(lotteries) == 1

    def __eq__(self, other: object) -> bool:
        return isinstance(other, Act) and self.name == other.name and self._items == other._items

    def __hash__(self) -> int:
        return hash((self.name, self._items))

    def __repr__(self) -> str:
        return f"Act({self.name!r})"


def constant_act(name: str, lottery: Lottery, state_space: Sequence[str]) -> Act:
    return Act(name, {state: lottery for state in state_space})


class Menu:
    """A finite, explicitly listed set of named acts over one state space."""

    __slots__ = ("_acts", "_best_cache", "_score_cache")

    def __init__(self, acts: Iterable[Act]):
        acts = tuple(acts)
        if not acts:
            raise ValueError("a menu needs at least one act")
        space = acts[0].state_space
        names = set()
        for act in acts:
            if act.state_space != space:
                raise DimensionMismatch(
                    f"act {act.name!r} is not defined over the menu's state space"
                )
            if act.name in names:
                raise ValueError(f"duplicate act name {act.name!r} in menu")
            names.add(act.name)
        self._acts = acts
        self._best_cache: dict[UtilitySpec, dict[str, Fraction]] = {}
        self._score_cache: dict = {}  # scratch space for evaluators; dies with the menu

    @property
    def acts(self) -> tuple[Act, ...]:
        return self._acts

    @property
    def state_space(self) -> tuple[str, ...]:
        return self._acts[0].state_space

    def __iter__(self):
        return iter(self._acts)

    def __len__(self) -> int:
        return len(self._acts)

    def __contains__(self, act: Act) -> bool:
        return any(a == act for a in self._acts)

    def with_act(self, act: Act) -> "Menu":
        """The menu enlarged by one act (identity if already present)."""
        if act in self:
            return self
        return Menu(self._acts + (act,))

    def union(self, acts: Iterable[Act]) -> "Menu":
        menu = self
        for act in acts:
            menu = menu.with_act(act)
        return menu

    def best_profile(self, u: UtilitySpec) -> dict[str, Fraction]:
        """Per-state maximum utility achieved by any menu act."""
        cached = self._best_cache.get(u)
        if cached is None:
            profiles = [act.utility_profile(u) for act in self._acts]
            cached = {
                state: max(profile[state] for profile in profiles)
                for state in self.state_space
            }
            self._best_cache[u] = cached
        return cached

    def __repr__(self) -> str:
        return f"Menu([{', '.join(a.name for a in self._acts)}])"


# -- the regret calculus -------------------------------------------------------

def act_utility(act: Act, u: UtilitySpec, state: str) -> Fraction:
    """Expected utility of the lottery the act assigns to the state."""
    if state not in act.state_space:
        raise DimensionMismatch(f"state {state!r} is not in the act's state space")
    return u.utility(act[state])


def _require_member(act: Act, menu: Menu) -> None:
    if act not in menu:
        raise ActNotInMenu(f"act {act.name!r} is not in the menu")


def regret(act: Act, state: str, menu: Menu, u: UtilitySpec) -> Fraction:
    """Gap between the best menu utility in the state and the act's utility."""
    _require_member(act, menu)
    best = max(act_utility(g, u, state) for g in menu)
    return best - act_utility(act, u, state)


def regret_profile(act: Act, menu: Menu, u: UtilitySpec) -> dict[str, Fraction]:
    _require_member(act, menu)
    best = menu.best_profile(u)
    profile = act.utility_profile(u)
    return {state: best[state] - profile[state] for state in menu.state_space}


def max_regret(act: Act, menu: Menu, u: UtilitySpec) -> Fraction:
    """Probability-free worst-case regret, the maximum over states."""
    return max(regret_profile(act, menu, u).values())


def expected_regret(act: Act, menu: Menu, u: UtilitySpec, pr: Measure) -> Fraction:
    profile = regret_profile(act, menu, u)
    if set(pr.state_space) != set(menu.state_space):
        raise DimensionMismatch("measure and menu use different state spaces")
    return pr.expectation(profile)


def mer(act: Act, menu: Menu, u: UtilitySpec, measures: Iterable[Measure]) -> Fraction:
    """Worst-case expected regret over an (unweighted) set of measures."""
    measures = tuple(measures)
    if not measures:
        raise BeliefKindMismatch("mer needs at least one measure")
    profile = regret_profile(act, menu, u)
    space = set(menu.state_space)
    for pr in measures:
        if set(pr.state_space) != space:
            raise DimensionMismatch("measure and menu use different state spaces")
    return max(pr.expectation(profile) for pr in measures)


def mwer(act: Act, menu: Menu, u: UtilitySpec, wset: WeightedMeasureSet) -> Fraction:
    """Worst-case weight-scaled expected regret over a weighted set."""
    profile = regret_profile(act, menu, u)
    if set(wset.state_space) != set(menu.state_space):
        raise DimensionMismatch("weighted set and menu use different state spaces")
    return max(w * m.expectation(profile) for m, w in wset.entries)


def seu(act: Act, u: UtilitySpec, pr: Measure) -> Fraction:
    """Subjective expected utility under a single measure."""
    if set(pr.state_space) != set(act.state_space):
        raise DimensionMismatch("measure and act use different state spaces")
    profile = act.utility_profile(u)
    return pr.expectation(profile)


def mmeu(act: Act, u: UtilitySpec, measures: Iterable[Measure]) -> Fraction:
    """Worst-case expected utility over a set of measures."""
    measures = tuple(measures)
    if not measures:
        raise BeliefKindMismatch("mmeu needs at least one measure")
    return min(seu(act, u, pr) for pr in measures)


# -- ranking -------------------------------------------------------------------

class Ranking:
    """A total preorder of menu acts induced by one rule's scores.

    Groups are ordered best first; acts inside a group have exactly equal
    scores.  `lower_is_better` records the orientation so consumers never
    re-derive it from the rule name.
    """

    __slots__ = ("rule", "lower_is_better", "groups", "scores")

    def __init__(
        self,
        rule: str,
        lower_is_better: bool,
        scores: Mapping[str, Fraction],
    ):
        self.rule = rule
        self.lower_is_better = lower_is_better
        self.scores = dict(scores)
        ordered = sorted(
            self.scores.items(),
            key=lambda kv: (kv[1] if lower_is_better else -kv[1], kv[0]),
        )
        groups: list[list[str]] = []
        last_score: Fraction | None = None
        for name, score in ordered:
            if last_score is not None and score == last_score:
                groups[-1].append(name)
            else:
                groups.append([name])
                last_score = score
        self.groups = tuple(tuple(g) for g in groups)

    @property
    def best(self) -> tuple[str, ...]:
        return self.groups[0]

    def score_of(self, name: str) -> Fraction:
        return self.scores[name]

    def to_tsv(self) -> str:
        lines = ["rank\tact\tscore\tdecimal"]
        for rank, group in enumerate(self.groups, start=1):
            for name in group:
                score = self.scores[name]
                lines.append(
                    f"{rank}\t{name}\t{format_rational(score)}\t{format_decimal(score)}"
                )
        return "\n".join(lines) + "\n"

    def to_obj(self) -> dict:
        return {
            "rule": self.rule,
            "lower_is_better": self.lower_is_better,
            "groups": [
                {
                    "rank": rank,
                    "acts": [
                        {
                            "name": name,
                            "score": format_rational(self.scores[name]),
                            "decimal": format_decimal(self.scores[name]),
                        }
                        for name in group
                    ],
                }
                for rank, group in enumerate(self.groups, start=1)
            ],
        }

    def __eq__(self, other: object) -> bool:
        return (
            isinstance(other, Ranking)
            and self.rule == other.rule
            and self.groups == other.groups
            and self.scores == other.scores
        )

    def __repr__(self) -> str:
        chain = " > ".join("{" + ", ".join(g) + "}" for g in self.groups)
        return f"Ranking({self.rule}: {chain})"


Belief = Union[None, Measure, tuple, list, frozenset, WeightedMeasureSet]


def rank(rule: str, menu: Menu, u: UtilitySpec, belief: Belief = None) -> Ranking:
    """Score every menu act under the rule and group exact ties.

    The belief kind must match the rule: a Measure for seu, a collection of
    Measures for mer and mmeu, a WeightedMeasureSet for mwer, and nothing for
    probability-free regret.
    """
    if rule == "seu":
        if not isinstance(belief, Measure):
            raise BeliefKindMismatch("seu needs a single Measure belief")
        scores = {act.name: seu(act, u, belief) for act in menu}
        return Ranking(rule, lower_is_better=False, scores=scores)
    if rule == "mmeu":
        measures = _measure_collection(belief, "mmeu")
        scores = {act.name: mmeu(act, u, measures) for act in menu}
        return Ranking(rule, lower_is_better=False, scores=scores)
    if rule == "regret":
        if belief is not None:
            raise BeliefKindMismatch("probability-free regret takes no belief")
        scores = {act.name: max_regret(act, menu, u) for act in menu}
        return Ranking(rule, lower_is_better=True, scores=scores)
    if rule == "mer":
        measures = _measure_collection(belief, "mer")
        scores = {act.name: mer(act, menu, u, measures) for act in menu}
        return Ranking(rule, lower_is_better=True, scores=scores)
    if rule == "mwer":
        if not isinstance(belief, WeightedMeasureSet):
            raise BeliefKindMismatch("mwer needs a WeightedMeasureSet belief")
        scores = {act.name: mwer(act, menu, u, belief) for act in menu}
        return Ranking(rule, lower_is_better=True, scores=scores)
    raise BeliefKindMismatch(f"unknown rule {rule!r}")


def _measure_collection(belief: Belief, rule: str) -> tuple[Measure, ...]:
    if isinstance(belief, Measure) or isinstance(belief, WeightedMeasureSet):
        raise BeliefKindMismatch(f"{rule} needs a collection of Measures")
    if belief is None:
        raise BeliefKindMismatch(f"{rule} needs a collection of Measures")
    measures = tuple(belief)
    if not measures or not all(isinstance(m, Measure) for m in measures):
        raise BeliefKindMismatch(f"{rule} needs a collection of Measures")
    return measures


# -- mixtures ------------------------------------------------------------------

def mixture_name(weight: Fraction, first: str, second: str) -> str:
    return f"{format_rational(weight)}*{first}+{format_rational(1 - weight)}*{second}"


def mix(weight: Rational, f: Act, g: Act, name: str | None = None) -> Act:
    """Statewise lottery mixture weight*f + (1-weight)*g."""
    weight = Fraction(weight)
    if not (0 <= weight <= 1):
        raise ValueError("mixture weight must lie in [0, 1]")
    if f.state_space != g.state_space:
        raise DimensionMismatch("cannot mix acts over different state spaces")
    if name is None:
        name = mixture_name(weight, f.name, g.name)
    return Act(name, {s: f[s].mix(weight, g[s]) for s in f.state_space})


def mix_menu(weight: Rational, menu: Menu, h: Act) -> Menu:
    """Elementwise mixture of every menu act with a fixed act."""
    weight = Fraction(weight)
    return Menu(tuple(mix(weight, act, h) for act in menu))
