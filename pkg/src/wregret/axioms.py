"""Property-based verification of the preference axioms.

Each axiom is checked against a preference oracle (a decision rule plus a
fixed belief) over seeded random instances together with a small curated
corpus of known counterexamples.  A `violated` verdict always carries a
replayable witness; `no-violation-found` is evidence, not proof, and the
reports expose sample counts so callers can calibrate.  The existential
clause of mixture continuity is searched over a finite mixture grid, and a
fruitless search is reported as `no-witness-in-grid` rather than `violated`.

Axiom ids: "1".."12" follow the order transitivity, completeness,
nontriviality, monotonicity, mixture continuity, hedging (ambiguity
aversion), independence, constant-act menu independence, independence of
never-strictly-optimal alternatives, menu boundedness, constant-act
independence, constant-mix indifference on state-independent menus.  Two
extra probes: "12u" drops axiom 12's state-independence requirement and
"menu" tests full menu independence of the ranking (both are known to fail
for regret-based rules; the corpus pins the standard instances).
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Mapping, Optional, Sequence, Union

from .decisions import (
    Act,
    Lottery,
    Menu,
    UtilitySpec,
    constant_act,
    mer,
    mix,
    mix_menu,
    mixture_name,
    mmeu,
    mwer,
    max_regret,
    seu,
)
from .errors import (
    ActNotInMenu,
    BeliefKindMismatch,
    DimensionMismatch,
    UnknownAxiom,
    UnknownPrize,
)
from .measures import Measure, WeightedMeasureSet, point_mass
from .rational import format_rational

ZERO = Fraction(0)
ONE = Fraction(1)

AXIOM_IDS = tuple(str(i) for i in range(1, 13)) + ("12u", "menu")


@dataclass(frozen=True)
class GeneratorConfig:
    """Bounds for random instance generation (kept small so arithmetic stays exact)."""

    samples: int = 200
    menu_size: int = 4
    utility_denominator: int = 10
    mixture_denominator: int = 20
    include_curated: bool = True

    def __post_init__(self) -> None:
        if self.menu_size > 6:
            raise ValueError("menu_size is capped at 6")
        if self.mixture_denominator > 20:
            raise ValueError("mixture_denominator is capped at 20")
        if self.utility_denominator > 10:
            raise ValueError("utility_denominator is capped at 10")


class PreferenceOracle:
    """A decision rule with a fixed belief, answering menu-relative comparisons."""

    def __init__(
        self,
        rule: str,
        belief,
        utility: UtilitySpec,
        state_space: Sequence[str] | None = None,
    ):
        self.rule = rule
        self.belief = belief
        self.utility = utility
        if state_space is not None:
            self.state_space = tuple(state_space)
        elif isinstance(belief, Measure):
            self.state_space = belief.state_space
        elif isinstance(belief, WeightedMeasureSet):
            self.state_space = belief.state_space
        elif belief is not None:
            measures = tuple(belief)
            self.state_space = measures[0].state_space
        else:
            raise ValueError("state_space is required when the rule takes no belief")
        self.lower_is_better = rule in ("regret", "mer", "mwer")

    def score(self, act: Act, menu: Menu) -> Fraction:
        cache = menu._score_cache.setdefault(self, {})
        cached = cache.get(act.name)
        if cached is not None and cache.get((act.name, "act")) == act:
            return cached
        if act not in menu:
            raise ActNotInMenu(f"act {act.name!r} is not in the menu")
        if self.rule == "seu":
            score = seu(act, self.utility, self.belief)
        elif self.rule == "mmeu":
            score = mmeu(act, self.utility, self.belief)
        elif self.rule == "regret":
            score = max_regret(act, menu, self.utility)
        elif self.rule == "mer":
            score = mer(act, menu, self.utility, self.belief)
        elif self.rule == "mwer":
            score = mwer(act, menu, self.utility, self.belief)
        else:
            raise BeliefKindMismatch(f"unknown rule {self.rule!r}")
        cache[act.name] = score
        cache[(act.name, "act")] = act
        return score

    def compare(self, f: Act, g: Act, menu: Menu) -> int:
        """+1 if f is strictly preferred to g in the menu, -1 if dispreferred, 0 if indifferent."""
        sf, sg = self.score(f, menu), self.score(g, menu)
        if sf == sg:
            return 0
        better = sf < sg if self.lower_is_better else sf > sg
        return 1 if better else -1


@dataclass
class Witness:
    """A concrete instance exhibiting (or failing to witness) an axiom."""

    axiom: str
    rule: str
    kind: str  # "violation" or "no-witness-in-grid"
    description: str
    menu: Menu
    acts: dict[str, Act]
    params: dict[str, object] = field(default_factory=dict)
    scores: dict[str, Fraction] = field(default_factory=dict)

    def to_obj(self) -> dict:
        return {
            "axiom": self.axiom,
            "rule": self.rule,
            "kind": self.kind,
            "description": self.description,
            "menu": [a.name for a in self.menu],
            "acts": {role: a.name for role, a in self.acts.items()},
            "params": {k: str(v) for k, v in self.params.items()},
            "scores": {k: format_rational(v) for k, v in self.scores.items()},
        }


@dataclass
class AxiomReport:
    """Outcome of checking one axiom against one oracle.

    A violated verdict always carries a replayable counterexample.  For the
    existentially quantified clause of mixture continuity, instances whose
    grid search found no mixture coefficient are counted in `unwitnessed`
    (with one exemplar retained); they are inconclusive, not violations.
    """

    axiom: str
    rule: str
    verdict: str  # no-violation-found | violated
    samples: int
    applicable: int
    curated: int
    seed: int
    counterexample: Optional[Witness] = None
    unwitnessed: int = 0
    unwitnessed_example: Optional[Witness] = None

    def to_obj(self) -> dict:
        return {
            "axiom": self.axiom,
            "rule": self.rule,
            "verdict": self.verdict,
            "samples": self.samples,
            "applicable": self.applicable,
            "curated": self.curated,
            "seed": self.seed,
            "counterexample": self.counterexample.to_obj() if self.counterexample else None,
            "unwitnessed": self.unwitnessed,
            "unwitnessed_example": (
                self.unwitnessed_example.to_obj() if self.unwitnessed_example else None
            ),
        }


# -- random instance generation --------------------------------------------------

# keyed by UtilitySpec identity (specs are immutable and few per process)
_SPAN_CACHE: dict[UtilitySpec, tuple[str, str, Fraction, Fraction]] = {}
_LOTTERY_CACHE: dict[tuple[UtilitySpec, Fraction], Lottery] = {}


def _utility_span(u: UtilitySpec) -> tuple[str, str, Fraction, Fraction]:
    span = _SPAN_CACHE.get(u)
    if span is None:
        items = u.items()
        lo_prize, lo = min(items, key=lambda kv: kv[1])
        hi_prize, hi = max(items, key=lambda kv: kv[1])
        span = (hi_prize, lo_prize, hi, lo)
        _SPAN_CACHE[u] = span
    return span


def value_lottery(value: Fraction, u: UtilitySpec) -> Lottery:
    """A two-prize lottery whose expected utility is exactly `value`."""
    key = (u, value)
    cached = _LOTTERY_CACHE.get(key)
    if cached is not None:
        return cached
    hi_prize, lo_prize, hi, lo = _utility_span(u)
    if not (lo <= value <= hi):
        raise ValueError(f"utility {value} outside the representable range [{lo}, {hi}]")
    p = (value - lo) / (hi - lo)
    lottery = Lottery({hi_prize: p, lo_prize: 1 - p})
    _LOTTERY_CACHE[key] = lottery
    return lottery

def profile_act(name: str, profile: Mapping[str, Fraction], u: UtilitySpec) -> Act:
    return Act(name, {s: value_lottery(Fraction(v), u) for s, v in profile.items()})


class _Sampler:
    """Seeded generation of acts, menus and mixture coefficients."""

    def __init__(self, rng: random.Random, oracle: PreferenceOracle, config: GeneratorConfig):
        self.rng = rng
        self.oracle = oracle
        self.config = config
        self.states = tuple(sorted(oracle.state_space))
        self._counter = 0

    def _fresh(self, prefix: str) -> str:
        self._counter += 1
        return f"{prefix}{self._counter}"

    def grid_value(self) -> Fraction:
        d = self.config.utility_denominator
        return Fraction(self.rng.randint(-d, d), d)

    def profile(self) -> dict[str, Fraction]:
        return {s: self.grid_value() for s in self.states}

    def act(self, prefix: str = "a") -> Act:
        return profile_act(self._fresh(prefix), self.profile(), self.oracle.utility)

    def constant(self, prefix: str = "c") -> Act:
        value = self.grid_value()
        return constant_act(
            self._fresh(prefix), value_lottery(value, self.oracle.utility), self.states
        )

    def mixture(self) -> Fraction:
        d = self.rng.randint(2, self.config.mixture_denominator)
        k = self.rng.randint(1, d - 1)
        return Fraction(k, d)

    def menu(self, min_size: int = 2, allow_mirror: bool = True) -> Menu:
        size = self.rng.randint(min_size, max(min_size, self.config.menu_size))
        acts = [self.act() for _ in range(size)]
        if allow_mirror and self.rng.random() < 0.5:
            base = self.rng.choice(acts)
            profile = base.utility_profile(self.oracle.utility)
            mirrored = dict(zip(self.states, reversed([profile[s] for s in self.states])))
            acts.append(profile_act(self._fresh("m"), mirrored, self.oracle.utility))
        if self.rng.random() < 0.4:
            acts.append(self.constant())
        return Menu(acts)

    def state_independent_menu(self) -> tuple[Menu, Act]:
        """A menu whose per-state outcome set is state-independent, plus a
        constant member act (cyclic assignments of one lottery tuple)."""
        k = len(self.states)
        values = [self.grid_value() for _ in range(max(k, 2))]
        lotteries = [value_lottery(v, self.oracle.utility) for v in values]
        acts = []
        for i in range(len(lotteries)):
            outcomes = {
                s: lotteries[(i + j) % len(lotteries)] for j, s in enumerate(self.states)
            }
            acts.append(Act(self._fresh("cyc"), outcomes))
        h = constant_act(
            self._fresh("h"), value_lottery(self.grid_value(), self.oracle.utility), self.states
        )
        return Menu(acts + [h]), h

    def pick(self, menu: Menu, n: int) -> list[Act]:
        return [menu.acts[i] for i in self.rng.sample(range(len(menu)), n)]


# -- per-axiom checkers ------------------------------------------------------------
# Each checker draws one instance and returns a (status, witness) pair where
# status is "pass", "vacuous", "violated" or "no-witness".

Check = tuple[str, Optional[Witness]]


def _check_transitivity(o: PreferenceOracle, s: _Sampler) -> Check:
    menu = s.menu(min_size=3)
    f, g, h = s.pick(menu, 3)
    if o.compare(f, g, menu) >= 0 and o.compare(g, h, menu) >= 0:
        if o.compare(f, h, menu) >= 0:
            return "pass", None
        return "violated", Witness(
            "1", o.rule, "violation", "f>=g and g>=h but not f>=h", menu,
            {"f": f, "g": g, "h": h},
        )
    return "vacuous", None


def _check_completeness(o: PreferenceOracle, s: _Sampler) -> Check:
    menu = s.menu(min_size=2)
    f, g = s.pick(menu, 2)
    forward, backward = o.compare(f, g, menu), o.compare(g, f, menu)
    if forward == -backward:
        return "pass", None
    return "violated", Witness(
        "2", o.rule, "violation", "comparison is not a complete order", menu,
        {"f": f, "g": g},
    )


def _check_nontriviality(o: PreferenceOracle, s: _Sampler) -> Check:
    hi_prize, lo_prize, hi, lo = _utility_span(o.utility)
    better = constant_act("nontrivial_hi", Lottery({hi_prize: 1}), s.states)
    worse = constant_act("nontrivial_lo", Lottery({lo_prize: 1}), s.states)
    menu = Menu([better, worse])
    if o.compare(better, worse, menu) > 0:
        return "pass", None
    return "violated", Witness(
        "3", o.rule, "violation",
        "no strict preference between prize extremes", menu,
        {"f": better, "g": worse},
    )


def _check_monotonicity(o: PreferenceOracle, s: _Sampler) -> Check:
    f = s.act("f")
    d = s.config.utility_denominator
    f_profile = f.utility_profile(o.utility)
    g_profile = {
        st: max(Fraction(-1), v - Fraction(s.rng.randint(0, d), d))
        for st, v in f_profile.items()
    }
    g = profile_act("gdom", g_profile, o.utility)
    menu = s.menu().union([f, g])
    # statewise precondition, queried through the oracle on constant-act pairs
    for st in s.states:
        cf = constant_act("mono_f", f[st], s.states)
        cg = constant_act("mono_g", g[st], s.states)
        if o.compare(cf, cg, Menu([cf, cg])) < 0:
            return "vacuous", None
    if o.compare(f, g, menu) >= 0:
        return "pass", None
    return "violated", Witness(
        "4", o.rule, "violation", "statewise-dominating act ranked strictly worse",
        menu, {"f": f, "g": g},
    )


def _mixture_grid(bound: int) -> list[Fraction]:
    values = {Fraction(k, d) for d in range(2, bound + 1) for k in range(1, d)}
    return sorted(values)


def _check_mixture_continuity(o: PreferenceOracle, s: _Sampler) -> Check:
    menu = s.menu(min_size=3)
    chain = None
    for _ in range(8):
        f, g, h = s.pick(menu, 3)
        if o.compare(f, g, menu) > 0 and o.compare(g, h, menu) > 0:
            chain = (f, g, h)
            break
    if chain is None:
        return "vacuous", None
    f, g, h = chain
    grid = _mixture_grid(s.config.mixture_denominator)
    q_found = None
    for q in reversed(grid):  # near 1 first: mixtures close to f
        mixed = mix(q, f, h)
        if o.compare(mixed, g, menu.with_act(mixed)) > 0:
            q_found = q
            break
    r_found = None
    for r in grid:  # near 0 first: mixtures close to h
        mixed = mix(r, f, h)
        if o.compare(g, mixed, menu.with_act(mixed)) > 0:
            r_found = r
            break
    if q_found is not None and r_found is not None:
        return "pass", None
    return "no-witness", Witness(
        "5", o.rule, "no-witness-in-grid",
        "no mixture coefficient in the grid witnesses the existential",
        menu, {"f": f, "g": g, "h": h},
        {"q": q_found, "r": r_found, "grid_denominator": s.config.mixture_denominator},
    )


def _indifferent_pair(o: PreferenceOracle, s: _Sampler, menu: Menu) -> Optional[tuple[Act, Act]]:
    acts = list(menu.acts)
    s.rng.shuffle(acts)
    for i in range(len(acts)):
        for j in range(i + 1, len(acts)):
            if o.compare(acts[i], acts[j], menu) == 0:
                return acts[i], acts[j]
    return None


def _check_hedging(o: PreferenceOracle, s: _Sampler) -> Check:
    menu = s.menu(min_size=2)
    pair = _indifferent_pair(o, s, menu)
    if pair is None:
        return "vacuous", None
    f, g = pair
    p = s.mixture()
    mixed = mix(p, f, g)
    enlarged = menu.with_act(mixed)
    if o.compare(mixed, g, enlarged) >= 0:
        return "pass", None
    return "violated", Witness(
        "6", o.rule, "violation", "hedge between indifferent acts ranked strictly worse",
        enlarged, {"f": f, "g": g, "mixture": mixed}, {"p": p},
        {"mixture": o.score(mixed, enlarged), "g": o.score(g, enlarged)},
    )


def _independence_instance(o: PreferenceOracle, s: _Sampler, h: Act, axiom: str) -> Check:
    menu = s.menu(min_size=2)
    f, g = s.pick(menu, 2)
    p = s.mixture()
    lhs = o.compare(f, g, menu)
    mixed_menu = mix_menu(p, menu, h)
    mf, mg = mix(p, f, h), mix(p, g, h)
    rhs = o.compare(mf, mg, mixed_menu)
    if lhs == rhs:
        return "pass", None
    return "violated", Witness(
        axiom, o.rule, "violation",
        "mixing with a common act changes the comparison",
        menu, {"f": f, "g": g, "h": h}, {"p": p},
        {
            "f": o.score(f, menu), "g": o.score(g, menu),
            "mixed_f": o.score(mf, mixed_menu), "mixed_g": o.score(mg, mixed_menu),
        },
    )


def _check_independence(o: PreferenceOracle, s: _Sampler) -> Check:
    return _independence_instance(o, s, s.act("h"), "7")


def _check_constant_menu_independence(o: PreferenceOracle, s: _Sampler) -> Check:
    c1, c2 = s.constant(), s.constant()
    menu_a = s.menu().union([c1, c2])
    menu_b = s.menu().union([c1, c2])
    if o.compare(c1, c2, menu_a) == o.compare(c1, c2, menu_b):
        return "pass", None
    return "violated", Witness(
        "8", o.rule, "violation", "constant-act comparison depends on the menu",
        menu_a, {"f": c1, "g": c2},
    )


def _check_ina(o: PreferenceOracle, s: _Sampler) -> Check:
    menu = s.menu(min_size=2)
    f, g = s.pick(menu, 2)
    best = menu.best_profile(o.utility)
    d = s.config.utility_denominator
    extras = []
    for _ in range(s.rng.randint(1, 2)):
        profile = {
            st: max(Fraction(-1), best[st] - Fraction(s.rng.randint(0, d), d))
            for st in s.states
        }
        extras.append(profile_act(s._fresh("nso"), profile, o.utility))
    enlarged = menu.union(extras)
    if o.compare(f, g, menu) == o.compare(f, g, enlarged):
        return "pass", None
    return "violated", Witness(
        "9", o.rule, "violation",
        "adding never-strictly-optimal acts changes the comparison",
        enlarged, {"f": f, "g": g}, {"base_menu": menu},
    )


def _check_boundedness(o: PreferenceOracle, s: _Sampler) -> Check:
    menu = s.menu()
    _, _, hi, _ = _utility_span(o.utility)
    best = menu.best_profile(o.utility)
    if all(v <= hi for v in best.values()):
        return "pass", None
    return "violated", Witness(
        "10", o.rule, "violation", "menu utilities exceed every lottery bound", menu, {},
    )


def _check_c_independence(o: PreferenceOracle, s: _Sampler) -> Check:
    return _independence_instance(o, s, s.constant("h"), "11")


def _state_independent(menu: Menu) -> bool:
    per_state = [
        frozenset(act[s] for act in menu) for s in menu.state_space
    ]
    return all(p == per_state[0] for p in per_state)


def _constant_mix_instance(
    o: PreferenceOracle, s: _Sampler, menu: Menu, h: Act, axiom: str
) -> Check:
    candidates = [f for f in menu if f != h and o.compare(h, f, menu) == 0]
    if not candidates:
        return "vacuous", None
    f = candidates[0]
    p = s.mixture()
    mixed = mix(p, f, h)
    enlarged = menu.with_act(mixed)
    if o.compare(mixed, f, enlarged) == 0:
        return "pass", None
    return "violated", Witness(
        axiom, o.rule, "violation",
        "mixing an act with an indifferent constant act breaks the indifference",
        enlarged, {"f": f, "h": h, "mixture": mixed}, {"p": p},
        {
            "f": o.score(f, enlarged),
            "h": o.score(h, enlarged),
            "mixture": o.score(mixed, enlarged),
        },
    )


def _check_constant_mix(o: PreferenceOracle, s: _Sampler) -> Check:
    menu, h = s.state_independent_menu()
    if not _state_independent(menu):  # defensive: the construction guarantees it
        return "vacuous", None
    return _constant_mix_instance(o, s, menu, h, "12")


def _check_constant_mix_unrestricted(o: PreferenceOracle, s: _Sampler) -> Check:
    h = s.constant("h")
    menu = s.menu().with_act(h)
    return _constant_mix_instance(o, s, menu, h, "12u")


def _check_menu_independence(o: PreferenceOracle, s: _Sampler) -> Check:
    menu = s.menu(min_size=2)
    f, g = s.pick(menu, 2)
    enlarged = menu.union([s.act() for _ in range(s.rng.randint(1, 2))])
    if o.compare(f, g, menu) == o.compare(f, g, enlarged):
        return "pass", None
    return "violated", Witness(
        "menu", o.rule, "violation", "enlarging the menu reverses the comparison",
        enlarged, {"f": f, "g": g}, {"base_menu": menu},
        scores={
            "f_small": o.score(f, menu), "g_small": o.score(g, menu),
            "f_large": o.score(f, enlarged), "g_large": o.score(g, enlarged),
        },
    )


_CHECKERS: dict[str, Callable[[PreferenceOracle, _Sampler], Check]] = {
    "1": _check_transitivity,
    "2": _check_completeness,
    "3": _check_nontriviality,
    "4": _check_monotonicity,
    "5": _check_mixture_continuity,
    "6": _check_hedging,
    "7": _check_independence,
    "8": _check_constant_menu_independence,
    "9": _check_ina,
    "10": _check_boundedness,
    "11": _check_c_independence,
    "12": _check_constant_mix,
    "12u": _check_constant_mix_unrestricted,
    "menu": _check_menu_independence,
}

_STRUCTURAL = ("3", "10")


# -- curated corpus ----------------------------------------------------------------

DELIVERY_STATES = ("one_broken", "ten_broken")

DELIVERY_UTILITY = UtilitySpec(
    {
        "full_fee": 10000,
        "nothing": 0,
        "penalty": -10000,
        "checked_fee": 5001,
        "checked_penalty": -4999,
        "double_fee": 20000,
        "double_penalty": -20000,
    }
)


def _pair_act(name: str, one: Fraction, ten: Fraction, u: UtilitySpec) -> Act:
    return profile_act(name, {"one_broken": one, "ten_broken": ten}, u)


def delivery_fixtures() -> "BeliefFixtures":
    """Standard fixtures on the two-class delivery state space."""
    one = point_mass("one_broken", DELIVERY_STATES)
    ten = point_mass("ten_broken", DELIVERY_STATES)
    return BeliefFixtures(
        utility=DELIVERY_UTILITY,
        state_space=DELIVERY_STATES,
        seu=one,
        mer=(one, ten),
        mmeu=(one, ten),
        mwer=WeightedMeasureSet([(one, 1), (ten, Fraction(1, 2))]),
    )


def _curated_menu_dependence(o: PreferenceOracle) -> Optional[Witness]:
    u = o.utility
    cont = _pair_act("cont", Fraction(10000), Fraction(-10000), u)
    back = _pair_act("back", Fraction(0), Fraction(0), u)
    check = _pair_act("check", Fraction(5001), Fraction(-4999), u)
    new = _pair_act("new", Fraction(20000), Fraction(-20000), u)
    base = Menu([cont, back, check])
    extended = Menu([cont, back, check, new])
    if o.compare(check, cont, base) == o.compare(check, cont, extended):
        return None
    return Witness(
        "menu", o.rule, "violation",
        "known delivery instance: an added dominated-nowhere act reverses the ranking",
        extended, {"f": check, "g": cont}, {"base_menu": base},
        scores={
            "f_small": o.score(check, base), "g_small": o.score(cont, base),
            "f_large": o.score(check, extended), "g_large": o.score(cont, extended),
        },
    )


def _curated_constant_mix(o: PreferenceOracle) -> Optional[Witness]:
    """State-independent outcome distributions, mirrored payoffs around zero."""
    u = o.utility
    acts = [
        _pair_act("cont", Fraction(10000), Fraction(-10000), u),
        _pair_act(mixture_name(Fraction(1, 2), "cont", "back"), Fraction(5000), Fraction(-5000), u),
        _pair_act("back", Fraction(0), Fraction(0), u),
        _pair_act("check1", Fraction(-5000), Fraction(5000), u),
        _pair_act("check2", Fraction(-10000), Fraction(10000), u),
    ]
    menu = Menu(acts)
    if not _state_independent(menu):
        return None
    cont, back = acts[0], acts[2]
    if o.compare(back, cont, menu) != 0:
        return None
    mixed = mix(Fraction(1, 2), cont, back)
    enlarged = menu.with_act(mixed)
    if o.compare(mixed, cont, enlarged) == 0:
        return None
    return Witness(
        "12", o.rule, "violation",
        "known state-independent instance: the half mixture beats both parents",
        enlarged, {"f": cont, "h": back, "mixture": mixed},
        {"p": Fraction(1, 2)},
        {
            "f": o.score(cont, enlarged),
            "h": o.score(back, enlarged),
            "mixture": o.score(mixed, enlarged),
        },
    )


def _curated_constant_mix_unrestricted(o: PreferenceOracle) -> Optional[Witness]:
    u = o.utility
    acts = [
        _pair_act("cont", Fraction(10000), Fraction(-10000), u),
        _pair_act(mixture_name(Fraction(1, 2), "cont", "back"), Fraction(5000), Fraction(-5000), u),
        _pair_act("back", Fraction(0), Fraction(0), u),
        _pair_act("check", Fraction(5001), Fraction(-4999), u),
    ]
    menu = Menu(acts)
    cont, back = acts[0], acts[2]
    if o.compare(back, cont, menu) != 0:
        return None
    mixed = mix(Fraction(1, 2), cont, back)
    enlarged = menu.with_act(mixed)
    if o.compare(mixed, cont, enlarged) == 0:
        return None
    return Witness(
        "12u", o.rule, "violation",
        "known instance without state-independent distributions",
        enlarged, {"f": cont, "h": back, "mixture": mixed},
        {"p": Fraction(1, 2)},
        {
            "f": o.score(cont, enlarged),
            "h": o.score(back, enlarged),
            "mixture": o.score(mixed, enlarged),
        },
    )


def _curated_mmeu_independence(o: PreferenceOracle) -> Optional[Witness]:
    """Pinned hedging instance: mixing with a mirrored act reverses worst cases."""
    u = o.utility
    f = _pair_act("steep", Fraction(1), Fraction(0), u)
    g = _pair_act("flat", Fraction(2, 5), Fraction(2, 5), u)
    h = _pair_act("mirror", Fraction(0), Fraction(1), u)
    menu = Menu([f, g])
    p = Fraction(1, 2)
    mixed_menu = mix_menu(p, menu, h)
    lhs = o.compare(f, g, menu)
    rhs = o.compare(mix(p, f, h), mix(p, g, h), mixed_menu)
    if lhs == rhs:
        return None
    return Witness(
        "7", o.rule, "violation",
        "pinned instance: hedging with a mirrored act reverses the comparison",
        menu, {"f": f, "g": g, "h": h}, {"p": p},
        {
            "f": o.score(f, menu), "g": o.score(g, menu),
            "mixed_f": o.score(mix(p, f, h), mixed_menu),
            "mixed_g": o.score(mix(p, g, h), mixed_menu),
        },
    )


_CURATED: dict[str, tuple[Callable[[PreferenceOracle], Optional[Witness]], ...]] = {
    "menu": (_curated_menu_dependence,),
    "12": (_curated_constant_mix,),
    "12u": (_curated_constant_mix_unrestricted,),
    "7": (_curated_mmeu_independence,),
}


# -- entry points -------------------------------------------------------------------

def check_axiom(
    axiom: Union[int, str],
    oracle: PreferenceOracle,
    config: GeneratorConfig | None = None,
    seed: int = 0,
) -> AxiomReport:
    """Check one axiom against an oracle: curated corpus first, then sampling."""
    axiom = str(axiom)
    if axiom not in _CHECKERS:
        raise UnknownAxiom(f"unknown axiom id {axiom!r}")
    config = config or GeneratorConfig()
    if len(oracle.state_space) > 6:
        raise ValueError("axiom checking is capped at 6 states")
    checker = _CHECKERS[axiom]
    rng = random.Random(seed)
    sampler = _Sampler(rng, oracle, config)

    curated_count = 0
    if config.include_curated:
        for builder in _CURATED.get(axiom, ()):
            try:
                witness = builder(oracle)
            except (UnknownPrize, DimensionMismatch, ValueError):
                continue  # fixture prizes or states don't fit this oracle
            curated_count += 1
            if witness is not None:
                return AxiomReport(
                    axiom, oracle.rule, "violated",
                    samples=0, applicable=curated_count,
                    curated=curated_count, seed=seed, counterexample=witness,
                )

    samples = 1 if axiom in _STRUCTURAL else config.samples
    applicable = 0
    unwitnessed = 0
    unwitnessed_example: Optional[Witness] = None
    for _ in range(samples):
        status, witness = checker(oracle, sampler)
        if status == "vacuous":
            continue
        applicable += 1
        if status == "violated":
            return AxiomReport(
                axiom, oracle.rule, "violated",
                samples=samples, applicable=applicable + curated_count,
                curated=curated_count, seed=seed, counterexample=witness,
            )
        if status == "no-witness":
            unwitnessed += 1
            if unwitnessed_example is None:
                unwitnessed_example = witness
    return AxiomReport(
        axiom, oracle.rule, "no-violation-found",
        samples=samples, applicable=applicable + curated_count,
        curated=curated_count, seed=seed,
        unwitnessed=unwitnessed, unwitnessed_example=unwitnessed_example,
    )


def replay(report: AxiomReport, oracle: PreferenceOracle) -> bool:
    """Re-run a violated report's witness against the oracle.

    Returns True when the stored instance still exhibits the violating
    pattern, making `violated` verdicts independently reproducible.
    """
    w = report.counterexample
    if w is None or w.kind != "violation":
        return False
    menu = w.menu
    if w.axiom == "1":
        f, g, h = w.acts["f"], w.acts["g"], w.acts["h"]
        return (
            oracle.compare(f, g, menu) >= 0
            and oracle.compare(g, h, menu) >= 0
            and oracle.compare(f, h, menu) < 0
        )
    if w.axiom == "2":
        f, g = w.acts["f"], w.acts["g"]
        return oracle.compare(f, g, menu) != -oracle.compare(g, f, menu)
    if w.axiom == "3":
        return oracle.compare(w.acts["f"], w.acts["g"], menu) <= 0
    if w.axiom == "4":
        return oracle.compare(w.acts["f"], w.acts["g"], menu) < 0
    if w.axiom == "6":
        return oracle.compare(w.acts["mixture"], w.acts["g"], menu) < 0
    if w.axiom in ("7", "11"):
        f, g, h, p = w.acts["f"], w.acts["g"], w.acts["h"], w.params["p"]
        mixed_menu = mix_menu(p, menu, h)
        return oracle.compare(f, g, menu) != oracle.compare(
            mix(p, f, h), mix(p, g, h), mixed_menu
        )
    if w.axiom in ("9", "menu"):
        f, g = w.acts["f"], w.acts["g"]
        base = w.params["base_menu"]
        return oracle.compare(f, g, base) != oracle.compare(f, g, menu)
    if w.axiom in ("12", "12u"):
        f, h, mixed = w.acts["f"], w.acts["h"], w.acts["mixture"]
        return (
            oracle.compare(h, f, menu) == 0
            and oracle.compare(mixed, f, menu) != 0
        )
    return False


# -- the rule-by-axiom matrix ---------------------------------------------------------

@dataclass
class BeliefFixtures:
    """Beliefs (and the utility table) used to instantiate each rule's oracle."""

    utility: UtilitySpec
    state_space: Sequence[str]
    seu: Measure
    mer: tuple[Measure, ...]
    mmeu: tuple[Measure, ...]
    mwer: WeightedMeasureSet

    def __post_init__(self) -> None:
        if len(self.mer) < 2 and len(self.mmeu) < 2:
            raise ValueError("fixtures need a multi-measure belief")
        if all(w == 1 for _, w in self.mwer.entries):
            raise ValueError("fixtures need a weighted belief with a non-unit weight")

    def oracle(self, rule: str) -> PreferenceOracle:
        belief = {
            "seu": self.seu,
            "mmeu": self.mmeu,
            "regret": None,
            "mer": self.mer,
            "mwer": self.mwer,
        }[rule]
        return PreferenceOracle(rule, belief, self.utility, self.state_space)


MATRIX_RULES = ("seu", "regret", "mer", "mwer", "mmeu")

MATRIX_COLUMNS: tuple[tuple[str, tuple[str, ...]], ...] = (
    ("ax1-6,8-10", ("1", "2", "3", "4", "5", "6", "8", "9", "10")),
    ("independence", ("7",)),
    ("c-independence", ("11",)),
    ("ax12", ("12",)),
)

_VERDICT_ORDER = {"no-violation-found": 0, "violated": 1}


@dataclass
class AxiomMatrix:
    reports: dict[tuple[str, str], AxiomReport]
    cells: dict[tuple[str, str], str]
    seed: int

    def to_obj(self) -> dict:
        return {
            "seed": self.seed,
            "cells": {
                rule: {col: self.cells[(rule, col)] for col, _ in MATRIX_COLUMNS}
                for rule in MATRIX_RULES
            },
            "reports": [r.to_obj() for r in self.reports.values()],
        }

    def to_text(self) -> str:
        marks = {"no-violation-found": "yes", "violated": "VIOLATED"}
        headers = ["rule"] + [col for col, _ in MATRIX_COLUMNS]
        rows = [
            [rule] + [marks[self.cells[(rule, col)]] for col, _ in MATRIX_COLUMNS]
            for rule in MATRIX_RULES
        ]
        widths = [max(len(r[i]) for r in [headers] + rows) for i in range(len(headers))]
        lines = ["  ".join(h.ljust(w) for h, w in zip(headers, widths))]
        for row in rows:
            lines.append("  ".join(v.ljust(w) for v, w in zip(row, widths)))
        return "\n".join(lines) + "\n"


def axiom_matrix(
    rules: Sequence[str] = MATRIX_RULES,
    fixtures: BeliefFixtures | None = None,
    seed: int = 0,
    config: GeneratorConfig | None = None,
) -> AxiomMatrix:
    """Check every rule against every matrix column and aggregate verdicts."""
    fixtures = fixtures or delivery_fixtures()
    config = config or GeneratorConfig()
    reports: dict[tuple[str, str], AxiomReport] = {}
    cells: dict[tuple[str, str], str] = {}
    for ri, rule in enumerate(rules):
        oracle = fixtures.oracle(rule)
        for ci, (column, axioms) in enumerate(MATRIX_COLUMNS):
            worst = "no-violation-found"
            for ai, axiom in enumerate(axioms):
                child_seed = seed * 10007 + ri * 997 + ci * 101 + ai
                report = check_axiom(axiom, oracle, config, seed=child_seed)
                reports[(rule, axiom)] = report
                if _VERDICT_ORDER[report.verdict] > _VERDICT_ORDER[worst]:
                    worst = report.verdict
            cells[(rule, column)] = worst
    return AxiomMatrix(reports=reports, cells=cells, seed=seed)
