"""Conditional preferences and sequential decision problems.

Conditioning a worst-case weighted regret agent on an event means updating
the belief by likelihood and re-scoring; the spliced-menu identity

    score of (f on E else h) in the spliced menu
        = upper likelihood of E  *  conditional score of f

ties the conditional and unconditional orders together exactly, and
`check_mdc` probes that biconditional on sampled instances.  Decision trees
are evaluated either by committing to the best root plan (ex-ante) or by
backward induction with an explicit choice of comparison menu at each node,
since a menu-dependent rule leaves that choice genuinely open.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Optional, Sequence, Union

from .axioms import AxiomReport, GeneratorConfig, PreferenceOracle, Witness, _Sampler
from .decisions import Act, Lottery, Menu, UtilitySpec, mwer
from .errors import (
    ActNotInMenu,
    MalformedTree,
    NullEvent,
    NullEventAtNode,
)
from .measures import (
    Event,
    EventLike,
    WeightedMeasureSet,
    _as_event,
    likelihood_update,
    normalize,
    upper_likelihood,
)
from .rational import format_rational

ZERO = Fraction(0)


@dataclass(frozen=True)
class SplicedAct:
    """The act that agrees with `on_event` inside the event and `off_event` outside."""

    on_event: Act
    off_event: Act
    event: Event

    def to_act(self, name: str | None = None) -> Act:
        if self.on_event.state_space != self.off_event.state_space:
            raise ValueError("spliced acts must share a state space")
        if name is None:
            name = f"{self.on_event.name}_else_{self.off_event.name}"
        outcomes = {
            s: (self.on_event[s] if s in self.event else self.off_event[s])
            for s in self.on_event.state_space
        }
        return Act(name, outcomes)


def splice(f: Act, event: EventLike, h: Act, name: str | None = None) -> Act:
    """Statewise composition: f inside the event, h outside."""
    return SplicedAct(f, h, _as_event(event)).to_act(name)


def splice_menu(menu: Menu, event: EventLike, h: Act) -> Menu:
    """Splice every menu act with the same off-event act."""
    event = _as_event(event)
    return Menu(tuple(splice(f, event, h) for f in menu))


def is_null(event: EventLike, wset: WeightedMeasureSet) -> bool:
    """True when every entry gives the event weight-scaled probability zero.

    Such events cannot influence any weighted regret score: splicing an act
    on them is score-invisible.
    """
    event = _as_event(event)
    return all(w * m.event_prob(event) == 0 for m, w in wset.entries)


def conditional_score(
    f: Act, event: EventLike, menu: Menu, u: UtilitySpec, wset: WeightedMeasureSet
) -> Fraction:
    """Worst-case weighted expected regret after updating on the event."""
    event = _as_event(event)
    if is_null(event, wset):
        raise NullEvent("conditional preferences are undefined on a null event")
    return mwer(f, menu, u, likelihood_update(wset, event))


def mdc_scaling_check(
    f: Act,
    event: EventLike,
    menu: Menu,
    h: Act,
    u: UtilitySpec,
    wset: WeightedMeasureSet,
) -> tuple[Fraction, Fraction]:
    """Both sides of the spliced-menu scaling identity (they must be equal).

    Left: the unconditional score of fEh against the spliced menu.
    Right: the event's upper likelihood times the conditional score of f.
    """
    event = _as_event(event)
    if f not in menu:
        raise ActNotInMenu(f"act {f.name!r} is not in the menu")
    if h not in menu:
        raise ActNotInMenu(f"act {h.name!r} is not in the menu")
    if is_null(event, wset):
        raise NullEvent("the scaling identity needs a non-null event")
    lhs = mwer(splice(f, event, h), splice_menu(menu, event, h), u, wset)
    rhs = upper_likelihood(wset, event) * conditional_score(f, event, menu, u, wset)
    return lhs, rhs


# -- conditional-preference families and the MDC probe ---------------------------

OracleFamily = Callable[[Event, Optional[Menu]], PreferenceOracle]


def likelihood_family(wset: WeightedMeasureSet, u: UtilitySpec) -> OracleFamily:
    """Conditional preferences driven by likelihood updating of the weights."""

    def family(event: Event, menu: Optional[Menu] = None) -> PreferenceOracle:
        return PreferenceOracle(
            "mwer", likelihood_update(wset, event), u, wset.state_space
        )

    return family


def frozen_weight_family(wset: WeightedMeasureSet, u: UtilitySpec) -> OracleFamily:
    """Measure-by-measure conditioning: weights frozen, zero-likelihood entries dropped."""

    def family(event: Event, menu: Optional[Menu] = None) -> PreferenceOracle:
        merged: dict = {}
        for m, w in wset.entries:
            if m.event_prob(event) == 0:
                continue
            conditioned = m.condition(event)
            if conditioned not in merged or merged[conditioned] < w:
                merged[conditioned] = w
        belief = normalize(WeightedMeasureSet(tuple(merged.items()), wset.state_space))
        return PreferenceOracle("mwer", belief, u, wset.state_space)

    return family


def check_mdc(
    family: OracleFamily,
    wset: WeightedMeasureSet,
    u: UtilitySpec,
    config: GeneratorConfig | None = None,
    seed: int = 0,
) -> AxiomReport:
    """Probe menu-dependent dynamic consistency on sampled instances.

    For each sampled menu, act pair and non-null event the conditional
    comparison must agree with the unconditional comparison of the spliced
    acts in the spliced menu, for every choice of the off-event act; the
    checker also verifies that the right-hand side does not depend on that
    choice.
    """
    config = config or GeneratorConfig()
    rng = random.Random(seed)
    states = tuple(sorted(wset.state_space))
    full = Event(states)
    unconditional = family(full, None)
    sampler = _Sampler(rng, unconditional, config)

    applicable = 0
    for _ in range(config.samples):
        menu = sampler.menu(min_size=2)
        f, g = sampler.pick(menu, 2)
        members = [s for s in states if rng.random() < 0.5]
        if not members:
            members = [rng.choice(states)]
        event = Event(members)
        if is_null(event, wset):
            continue
        applicable += 1
        conditional = family(event, menu).compare(f, g, menu)
        spliced_signs = []
        for h in menu:
            spliced_menu = splice_menu(menu, event, h)
            sign = unconditional.compare(
                splice(f, event, h), splice(g, event, h), spliced_menu
            )
            spliced_signs.append((h, sign))
        signs = {sign for _, sign in spliced_signs}
        if len(signs) > 1:
            return AxiomReport(
                "mdc", unconditional.rule, "violated", config.samples, applicable,
                0, seed,
                Witness(
                    "mdc", unconditional.rule, "violation",
                    "the spliced comparison depends on the off-event act",
                    menu, {"f": f, "g": g},
                    {"event": sorted(event.members),
                     "signs": {h.name: s for h, s in spliced_signs}},
                ),
            )
        if conditional != signs.pop():
            return AxiomReport(
                "mdc", unconditional.rule, "violated", config.samples, applicable,
                0, seed,
                Witness(
                    "mdc", unconditional.rule, "violation",
                    "conditional and spliced comparisons disagree",
                    menu, {"f": f, "g": g, "h": spliced_signs[0][0]},
                    {"event": sorted(event.members),
                     "conditional": conditional,
                     "spliced": spliced_signs[0][1]},
                ),
            )
    return AxiomReport(
        "mdc", unconditional.rule, "no-violation-found",
        config.samples, applicable, 0, seed, None,
    )


def replay_mdc(report: AxiomReport, family: OracleFamily) -> bool:
    """Re-run a violated dynamic-consistency report against its family."""
    w = report.counterexample
    if w is None or w.kind != "violation":
        return False
    menu = w.menu
    event = Event(w.params["event"])
    f, g = w.acts["f"], w.acts["g"]
    states = menu.state_space
    unconditional = family(Event(states), None)
    signs = set()
    for h in menu:
        spliced = splice_menu(menu, event, h)
        signs.add(unconditional.compare(splice(f, event, h), splice(g, event, h), spliced))
    if len(signs) > 1:
        return True
    conditional = family(event, menu).compare(f, g, menu)
    return conditional != signs.pop()


# -- decision trees ----------------------------------------------------------------

@dataclass(frozen=True)
class Leaf:
    """Terminal node holding either a lottery or a bare utility value."""

    lottery: Optional[Lottery] = None
    utility: Optional[Fraction] = None

    def __post_init__(self) -> None:
        if (self.lottery is None) == (self.utility is None):
            raise MalformedTree("a leaf holds exactly one of: lottery, utility")


@dataclass(frozen=True)
class DecisionNode:
    name: str
    branches: tuple[tuple[str, "TreeNode"], ...]

    def __post_init__(self) -> None:
        if not self.branches:
            raise MalformedTree(f"decision node {self.name!r} has no branches")
        names = [b for b, _ in self.branches]
        if len(set(names)) != len(names):
            raise MalformedTree(f"decision node {self.name!r} has duplicate branch names")


@dataclass(frozen=True)
class NatureNode:
    partition: tuple[tuple[Event, "TreeNode"], ...]

    def __post_init__(self) -> None:
        if not self.partition:
            raise MalformedTree("nature node has an empty partition")


TreeNode = Union[Leaf, DecisionNode, NatureNode]


@dataclass(frozen=True)
class DecisionTree:
    root: TreeNode


@dataclass(frozen=True)
class Plan:
    """A strategy: one branch per reachable decision node, viewed as an act."""

    name: str
    choices: tuple[tuple[str, str], ...]
    act: Act

    def choice_at(self, node: str) -> Optional[str]:
        return dict(self.choices).get(node)


@dataclass
class _NodeInfo:
    name: str
    depth: int
    order: int
    live: frozenset[str]
    ancestors: tuple[tuple[str, str], ...]  # (decision node, branch) pairs


def _synth_prize(value: Fraction) -> str:
    return f"util:{format_rational(value)}"


def _validate(node: TreeNode, live: frozenset[str], seen_names: set[str]) -> None:
    if isinstance(node, Leaf):
        return
    if isinstance(node, DecisionNode):
        if node.name in seen_names:
            raise MalformedTree(f"duplicate decision node name {node.name!r}")
        seen_names.add(node.name)
        for _, child in node.branches:
            _validate(child, live, seen_names)
        return
    covered: set[str] = set()
    for event, child in node.partition:
        cell = event.members & live
        if not cell:
            raise MalformedTree(
                f"nature branch for {sorted(event.members)} is empty on live states {sorted(live)}"
            )
        duplicated = covered & cell
        if duplicated:
            raise MalformedTree(f"nature partition overlaps on states {sorted(duplicated)}")
        covered |= cell
        _validate(child, frozenset(cell), seen_names)
    missing = live - covered
    if missing:
        raise MalformedTree(f"nature partition misses states {sorted(missing)}")


def _collect_leaf_utilities(node: TreeNode, acc: set[Fraction]) -> None:
    if isinstance(node, Leaf):
        if node.utility is not None:
            acc.add(Fraction(node.utility))
        return
    children = (
        [c for _, c in node.branches] if isinstance(node, DecisionNode)
        else [c for _, c in node.partition]
    )
    for child in children:
        _collect_leaf_utilities(child, acc)


def _expand(
    node: TreeNode, live: frozenset[str], u: UtilitySpec
) -> list[tuple[dict[str, str], list[str], dict[str, Lottery]]]:
    if isinstance(node, Leaf):
        lottery = node.lottery if node.lottery is not None else Lottery(
            {_synth_prize(Fraction(node.utility)): 1}
        )
        return [({}, [], {s: lottery for s in live})]
    if isinstance(node, DecisionNode):
        out = []
        for branch, child in node.branches:
            for choices, parts, outcomes in _expand(child, live, u):
                out.append(({node.name: branch, **choices}, [branch] + parts, outcomes))
        return out
    combos = [({}, [], {})]
    for event, child in node.partition:
        cell = frozenset(event.members & live)
        sub = _expand(child, cell, u)
        merged = []
        for choices, parts, outcomes in combos:
            for c2, p2, o2 in sub:
                merged.append(({**choices, **c2}, parts + p2, {**outcomes, **o2}))
        combos = merged
    return combos


def _decision_nodes(
    node: TreeNode,
    live: frozenset[str],
    ancestors: tuple[tuple[str, str], ...],
    depth: int,
    acc: list[_NodeInfo],
) -> None:
    if isinstance(node, Leaf):
        return
    if isinstance(node, DecisionNode):
        acc.append(_NodeInfo(node.name, depth, len(acc), live, ancestors))
        for branch, child in node.branches:
            _decision_nodes(child, live, ancestors + ((node.name, branch),), depth + 1, acc)
        return
    for event, child in node.partition:
        _decision_nodes(child, frozenset(event.members & live), ancestors, depth + 1, acc)


def enumerate_plans(
    tree: DecisionTree, state_space: Sequence[str], u: UtilitySpec
) -> tuple[list[Plan], UtilitySpec]:
    """All strategies of the tree as named acts, plus the utility table
    extended with synthesized prizes for bare-utility leaves."""
    live = frozenset(state_space)
    _validate(tree.root, live, set())
    bare: set[Fraction] = set()
    _collect_leaf_utilities(tree.root, bare)
    extended = u.extended({_synth_prize(v): v for v in bare}) if bare else u
    plans = []
    for choices, parts, outcomes in _expand(tree.root, live, extended):
        name = "+".join(parts) if parts else "unconditional"
        plans.append(Plan(name, tuple(sorted(choices.items())), Act(name, outcomes)))
    if len({p.name for p in plans}) != len(plans):
        raise MalformedTree("plan names are not unique; rename branches")
    return plans, extended


@dataclass
class NodeDiagnostic:
    node: str
    live: tuple[str, ...]
    menu: tuple[str, ...]
    scores: dict[str, Fraction]
    eliminated: tuple[str, ...]
    kept: tuple[str, ...]

    def to_obj(self) -> dict:
        return {
            "node": self.node,
            "live": list(self.live),
            "menu": list(self.menu),
            "scores": {k: format_rational(v) for k, v in self.scores.items()},
            "eliminated": list(self.eliminated),
            "kept": list(self.kept),
        }


@dataclass
class TreeEvaluation:
    planning: str
    menu_policy: str
    chosen: Plan
    survivors: tuple[str, ...]
    diagnostics: tuple[NodeDiagnostic, ...]
    plans: tuple[Plan, ...]
    utility: UtilitySpec  # input table extended with synthesized leaf prizes

    def to_obj(self) -> dict:
        return {
            "planning": self.planning,
            "menu_policy": self.menu_policy,
            "chosen": self.chosen.name,
            "choices": dict(self.chosen.choices),
            "survivors": list(self.survivors),
            "plans": [p.name for p in self.plans],
            "diagnostics": [d.to_obj() for d in self.diagnostics],
        }


def _belief_at(wset: WeightedMeasureSet, live: frozenset[str]) -> WeightedMeasureSet:
    event = Event(live)
    if upper_likelihood(wset, event) == 0:
        raise NullEventAtNode(
            f"information set {sorted(live)} has upper likelihood 0"
        )
    if set(live) == set(wset.state_space):
        return normalize(wset)
    return likelihood_update(wset, event)


def evaluate_tree(
    tree: DecisionTree,
    u: UtilitySpec,
    wset: WeightedMeasureSet,
    planning: str = "sophisticated",
    menu_policy: str = "full",
) -> TreeEvaluation:
    """Choose a plan, ex-ante or by backward induction.

    Ex-ante mode scores all plans at the root belief and commits.  The
    sophisticated mode resolves decision nodes leaves-upward: at each node
    the continuation plans are scored under the belief conditioned on the
    node's information set, against either every plan through the node
    (`full`) or only the still-viable ones (`viable`).  Ties keep every tied
    plan viable; the final pick among survivors is lexicographic by name.
    """
    if planning not in ("ex-ante", "sophisticated"):
        raise ValueError(f"unknown planning mode {planning!r}")
    if menu_policy not in ("full", "viable"):
        raise ValueError(f"unknown menu policy {menu_policy!r}")
    plans, ext_u = enumerate_plans(tree, wset.state_space, u)
    diagnostics: list[NodeDiagnostic] = []

    if planning == "ex-ante":
        belief = normalize(wset)
        menu = Menu(tuple(p.act for p in plans))
        scores = {p.name: mwer(p.act, menu, ext_u, belief) for p in plans}
        best = min(scores.values())
        kept = tuple(sorted(n for n, s in scores.items() if s == best))
        eliminated = tuple(sorted(n for n, s in scores.items() if s != best))
        diagnostics.append(
            NodeDiagnostic(
                "<root>", tuple(sorted(wset.state_space)),
                tuple(p.name for p in plans), scores, eliminated, kept,
            )
        )
        chosen = next(p for p in plans if p.name == kept[0])
        return TreeEvaluation(
            planning, menu_policy, chosen, kept, tuple(diagnostics), tuple(plans), ext_u
        )

    infos: list[_NodeInfo] = []
    _decision_nodes(tree.root, frozenset(wset.state_space), (), 0, infos)
    infos.sort(key=lambda i: (-i.depth, i.order))
    survivors = {p.name for p in plans}
    for info in infos:
        anc = dict(info.ancestors)
        group = [
            p for p in plans
            if all(p.choice_at(node) == branch for node, branch in anc.items())
        ]
        alive = [p for p in group if p.name in survivors]
        if not alive:
            raise MalformedTree(f"no viable plan reaches node {info.name!r}")
        belief = _belief_at(wset, info.live)
        pool = group if menu_policy == "full" else alive
        menu = Menu(tuple(p.act for p in pool))
        scores = {p.name: mwer(p.act, menu, ext_u, belief) for p in pool}
        best = min(scores[p.name] for p in alive)
        dropped = tuple(sorted(p.name for p in alive if scores[p.name] != best))
        kept = tuple(sorted(p.name for p in alive if scores[p.name] == best))
        survivors -= set(dropped)
        diagnostics.append(
            NodeDiagnostic(
                info.name, tuple(sorted(info.live)),
                tuple(p.name for p in pool), scores, dropped, kept,
            )
        )
    final = tuple(sorted(survivors))
    chosen = next(p for p in plans if p.name == final[0])
    return TreeEvaluation(
        planning, menu_policy, chosen, final, tuple(diagnostics), tuple(plans), ext_u
    )
