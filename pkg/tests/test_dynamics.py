"""Conditional preferences, the scaling identity, MDC, and decision trees."""

import random
from fractions import Fraction
from math import comb

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from wregret import (
    Act,
    Event,
    Measure,
    Menu,
    UtilitySpec,
    WeightedMeasureSet,
    mwer,
    point_mass,
    rank,
)
from wregret.axioms import GeneratorConfig, profile_act
from wregret.dynamics import (
    DecisionNode,
    DecisionTree,
    Leaf,
    NatureNode,
    check_mdc,
    conditional_score,
    evaluate_tree,
    frozen_weight_family,
    is_null,
    likelihood_family,
    mdc_scaling_check,
    replay_mdc,
    splice,
    splice_menu,
)
from wregret.errors import MalformedTree, NullEvent, NullEventAtNode

from conftest import DELIVERY_STATES, random_wset

F = Fraction

GRID_U = UtilitySpec({"top": 1, "bot": -1})
STATES4 = ("s1", "s2", "s3", "s4")


def grid_act(name, **values) -> Act:
    return profile_act(name, {s: F(v) for s, v in values.items()}, GRID_U)


class TestSplice:
    def test_full_event_returns_on_act(self, delivery_acts):
        spliced = splice(delivery_acts["cont"], Event(DELIVERY_STATES), delivery_acts["back"])
        assert spliced.items() == delivery_acts["cont"].items()

    def test_empty_event_returns_off_act(self, delivery_acts):
        spliced = splice(delivery_acts["cont"], Event([]), delivery_acts["back"])
        assert spliced.items() == delivery_acts["back"].items()

    def test_check_is_cont_spliced_with_back(self, delivery_acts, delivery_utility):
        # checking is continuing on the one-broken class and going back
        # elsewhere; the utility profiles agree up to the uniform 4999
        # inspection cost
        spliced = splice(delivery_acts["cont"], Event(["one_broken"]), delivery_acts["back"])
        profile = spliced.utility_profile(delivery_utility)
        check = delivery_acts["check"].utility_profile(delivery_utility)
        assert profile == {"one_broken": 10000, "ten_broken": 0}
        assert all(profile[s] == check[s] + 4999 for s in profile)

    def test_self_splice_is_identity(self, delivery_acts):
        f = delivery_acts["check"]
        assert splice(f, Event(["one_broken"]), f).items() == f.items()

    def test_splice_menu_names_are_deterministic(self, base_menu, delivery_acts):
        spliced = splice_menu(base_menu, Event(["one_broken"]), delivery_acts["back"])
        assert [a.name for a in spliced] == [
            "cont_else_back", "back_else_back", "check_else_back",
        ]


class TestNullEvents:
    def test_empty_event_is_null(self, delivery_wset):
        assert is_null(Event([]), delivery_wset)

    def test_full_space_not_null(self, delivery_wset):
        assert not is_null(Event(DELIVERY_STATES), delivery_wset)

    def test_weight_zero_support_is_null(self):
        # the event has positive probability only under a weight-0 measure
        states = ("a", "b")
        live = Measure({"a": 1, "b": 0})
        ghost = Measure({"a": 0, "b": 1})
        wset = WeightedMeasureSet([(live, 1), (ghost, 0)], states)
        event = Event(["b"])
        assert is_null(event, wset)
        # definitional confirmation: splicing anything on the event is
        # score-invisible for every sampled pair and menu
        rng = random.Random(5)
        for _ in range(25):
            f = grid_act("f", a=F(rng.randint(-10, 10), 10), b=F(rng.randint(-10, 10), 10))
            g = grid_act("g", a=F(rng.randint(-10, 10), 10), b=F(rng.randint(-10, 10), 10))
            feg = splice(f, event, g)
            menu = Menu([feg, g, grid_act("d", a=1, b=1)])
            assert mwer(feg, menu, GRID_U, wset) == mwer(g, menu, GRID_U, wset)


class TestConditionalScore:
    def test_full_space_equals_unconditional(self, base_menu, delivery_utility, delivery_wset):
        for act in base_menu:
            assert conditional_score(
                act, Event(DELIVERY_STATES), base_menu, delivery_utility, delivery_wset
            ) == mwer(act, base_menu, delivery_utility, delivery_wset)

    def test_null_event_rejected(self, base_menu, delivery_acts, delivery_utility, delivery_wset):
        with pytest.raises(NullEvent):
            conditional_score(
                delivery_acts["cont"], Event([]), base_menu, delivery_utility, delivery_wset
            )

    def test_inspected_prefix_scores(self, delivery_utility):
        # four-state refinement: conditioning on a clean hundred-item prefix
        # leaves the class acts unchanged and scales the ten-broken weight to
        # the exact binomial ratio
        states = ("one_good", "one_bad", "ten_good", "ten_bad")
        p_ten = F(comb(900, 10), comb(1000, 10))
        one = Measure({"one_good": F(9, 10), "one_bad": F(1, 10), "ten_good": 0, "ten_bad": 0})
        ten = Measure({"one_good": 0, "one_bad": 0, "ten_good": p_ten, "ten_bad": 1 - p_ten})
        wset = WeightedMeasureSet([(one, 1), (ten, 1)], states)
        event = Event(["one_good", "ten_good"])

        def class_act(name, one_value, ten_value):
            return profile_act(
                name,
                {
                    "one_good": F(one_value), "one_bad": F(one_value),
                    "ten_good": F(ten_value), "ten_bad": F(ten_value),
                },
                UtilitySpec({"hi": 20000, "lo": -20000}),
            )

        cont = class_act("cont", 10000, -10000)
        back = class_act("back", 0, 0)
        check = class_act("check", 5001, -4999)
        menu = Menu([cont, back, check])
        u = UtilitySpec({"hi": 20000, "lo": -20000})
        w = p_ten / F(9, 10)
        assert conditional_score(cont, event, menu, u, wset) == 10000 * w
        assert conditional_score(back, event, menu, u, wset) == 10000
        assert conditional_score(check, event, menu, u, wset) == 4999

    def test_singleton_belief_gives_conditional_seu_ranking(self, delivery_utility):
        states = ("a", "b", "c")
        pr = Measure({"a": F(1, 2), "b": F(1, 4), "c": F(1, 4)})
        wset = WeightedMeasureSet([(pr, 1)], states)
        event = Event(["a", "b"])
        acts = [
            profile_act("x", {"a": F(1), "b": F(-1), "c": F(0)}, GRID_U),
            profile_act("y", {"a": F(0), "b": F(1, 2), "c": F(0)}, GRID_U),
            profile_act("z", {"a": F(-1, 2), "b": F(1), "c": F(0)}, GRID_U),
        ]
        menu = Menu(acts)
        scores = {a.name: conditional_score(a, event, menu, GRID_U, wset) for a in acts}
        regret_order = sorted(scores, key=lambda n: (scores[n], n))
        conditioned = pr.condition(event)
        seu_ranking = rank("seu", menu, GRID_U, conditioned)
        assert tuple(regret_order) == tuple(n for g in seu_ranking.groups for n in g)


class TestScalingIdentity:
    def test_full_space_trivial(self, base_menu, delivery_acts, delivery_utility, delivery_wset):
        lhs, rhs = mdc_scaling_check(
            delivery_acts["cont"], Event(DELIVERY_STATES), base_menu,
            delivery_acts["back"], delivery_utility, delivery_wset,
        )
        assert lhs == rhs == mwer(delivery_acts["cont"], base_menu, delivery_utility, delivery_wset)

    def test_delivery_one_broken_by_hand(self, base_menu, delivery_acts, delivery_utility, delivery_wset):
        # conditioning on the one-broken class keeps only that point mass;
        # conditional regrets are the one-broken column, so
        #   rhs = 1 * (one-broken regret), and the spliced computation
        #   gives the same number directly
        event = Event(["one_broken"])
        for name, expected in (("cont", 0), ("back", 10000), ("check", 4999)):
            lhs, rhs = mdc_scaling_check(
                delivery_acts[name], event, base_menu,
                delivery_acts["back"], delivery_utility, delivery_wset,
            )
            assert lhs == rhs == expected

    @settings(max_examples=60, deadline=None)
    @given(seed=st.integers(min_value=0, max_value=10**6))
    def test_random_instances_exact(self, seed):
        rng = random.Random(seed)
        wset = random_wset(rng, STATES4)
        members = [s for s in STATES4 if rng.random() < 0.6] or ["s1"]
        event = Event(members)
        if is_null(event, wset):
            return
        acts = [
            profile_act(
                f"a{i}", {s: F(rng.randint(-10, 10), 10) for s in STATES4}, GRID_U
            )
            for i in range(3)
        ]
        menu = Menu(acts)
        lhs, rhs = mdc_scaling_check(acts[0], event, menu, acts[1], GRID_U, wset)
        assert lhs == rhs

    def test_null_event_rejected(self, base_menu, delivery_acts, delivery_utility, delivery_wset):
        with pytest.raises(NullEvent):
            mdc_scaling_check(
                delivery_acts["cont"], Event([]), base_menu,
                delivery_acts["back"], delivery_utility, delivery_wset,
            )


class TestMdc:
    def test_likelihood_family_consistent(self):
        rng = random.Random(1)
        wset = random_wset(rng, STATES4)
        report = check_mdc(
            likelihood_family(wset, GRID_U), wset, GRID_U, GeneratorConfig(samples=150), seed=2
        )
        assert report.verdict == "no-violation-found"
        assert report.applicable > 50

    def test_frozen_weights_inconsistent_when_likelihoods_differ(self):
        # pinned instance, verified by hand: E = {s1, s2},
        #   m_a = (8/10, 1/10, 1/10),  m_b = (1/10, 2/10, 7/10)
        # menu {d=(1,1,1), f=(1,0,1), g=(1/3,1,1)}:
        #   frozen-weight conditional scores: f -> 2/3, g -> 16/27 (g wins)
        #   spliced with h=d:                f -> 1/5, g -> 8/15 (f wins)
        states = ("s1", "s2", "s3")
        m_a = Measure({"s1": F(8, 10), "s2": F(1, 10), "s3": F(1, 10)})
        m_b = Measure({"s1": F(1, 10), "s2": F(2, 10), "s3": F(7, 10)})
        wset = WeightedMeasureSet([(m_a, 1), (m_b, 1)], states)
        event = Event(["s1", "s2"])
        d = profile_act("d", {"s1": F(1), "s2": F(1), "s3": F(1)}, GRID_U)
        f = profile_act("f", {"s1": F(1), "s2": F(0), "s3": F(1)}, GRID_U)
        g = profile_act("g", {"s1": F(1, 3), "s2": F(1), "s3": F(1)}, GRID_U)
        menu = Menu([d, f, g])

        frozen = frozen_weight_family(wset, GRID_U)
        conditional = frozen(event, menu)
        assert conditional.score(f, menu) == F(2, 3)
        assert conditional.score(g, menu) == F(16, 27)
        unconditional = frozen(Event(states), None)
        spliced = splice_menu(menu, event, d)
        fed, ged = splice(f, event, d), splice(g, event, d)
        assert unconditional.score(fed, spliced) == F(1, 5)
        assert unconditional.score(ged, spliced) == F(8, 15)
        # conditional prefers g, unconditional spliced prefers f
        assert conditional.compare(f, g, menu) < 0 < unconditional.compare(fed, ged, spliced)

        report = check_mdc(frozen, wset, GRID_U, GeneratorConfig(samples=400), seed=0)
        assert report.verdict == "violated"
        assert replay_mdc(report, frozen)
        assert not replay_mdc(report, likelihood_family(wset, GRID_U))

    def test_singleton_belief_families_coincide(self):
        states = ("s1", "s2", "s3")
        pr = Measure({"s1": F(1, 2), "s2": F(1, 4), "s3": F(1, 4)})
        wset = WeightedMeasureSet([(pr, 1)], states)
        for family in (likelihood_family(wset, GRID_U), frozen_weight_family(wset, GRID_U)):
            report = check_mdc(family, wset, GRID_U, GeneratorConfig(samples=100), seed=4)
            assert report.verdict == "no-violation-found"


# -- decision trees ----------------------------------------------------------------

def restaurant_ingredients():
    states = ("msg_allergy", "basil_allergy")
    u = UtilitySpec(
        {
            "pasta_meal": 5, "stirfry_meal": 3, "plain_rice": 0,
            "msg_reaction": -2, "basil_reaction": -3,
        }
    )
    msg, basil = Event(["msg_allergy"]), Event(["basil_allergy"])
    tree = DecisionTree(
        DecisionNode(
            "restaurant",
            (
                (
                    "chinese",
                    DecisionNode(
                        "order",
                        (
                            ("stirfry", NatureNode(((msg, Leaf(utility=F(-2))), (basil, Leaf(utility=F(3)))))),
                            ("rice", NatureNode(((msg, Leaf(utility=F(0))), (basil, Leaf(utility=F(0)))))),
                        ),
                    ),
                ),
                ("italian", NatureNode(((msg, Leaf(utility=F(5))), (basil, Leaf(utility=F(-3)))))),
            ),
        )
    )
    wset = WeightedMeasureSet(
        [(point_mass("msg_allergy", states), 1), (point_mass("basil_allergy", states), 1)],
        states,
    )
    return tree, u, wset


class TestTrees:
    def test_ex_ante_prefers_rice_plan(self):
        tree, u, wset = restaurant_ingredients()
        result = evaluate_tree(tree, u, wset, planning="ex-ante")
        assert result.chosen.name == "chinese+rice"
        assert result.diagnostics[0].scores == {
            "chinese+stirfry": 7, "chinese+rice": 5, "italian": 6,
        }

    @pytest.mark.parametrize("policy", ["full", "viable"])
    def test_sophisticated_eliminates_rice_then_goes_italian(self, policy):
        tree, u, wset = restaurant_ingredients()
        result = evaluate_tree(tree, u, wset, planning="sophisticated", menu_policy=policy)
        assert result.chosen.name == "italian"
        order_diag = next(d for d in result.diagnostics if d.node == "order")
        assert order_diag.scores["chinese+stirfry"] == 2
        assert order_diag.scores["chinese+rice"] == 3
        assert order_diag.eliminated == ("chinese+rice",)

    def test_single_decision_node_matches_rank(self, delivery_utility, delivery_wset):
        lottery_of = {
            "cont": {"one_broken": F(10000), "ten_broken": F(-10000)},
            "back": {"one_broken": F(0), "ten_broken": F(0)},
            "check": {"one_broken": F(5001), "ten_broken": F(-4999)},
        }
        one, ten = Event(["one_broken"]), Event(["ten_broken"])
        branches = []
        for name, profile in lottery_of.items():
            branches.append(
                (
                    name,
                    NatureNode(
                        (
                            (one, Leaf(utility=profile["one_broken"])),
                            (ten, Leaf(utility=profile["ten_broken"])),
                        )
                    ),
                )
            )
        tree = DecisionTree(DecisionNode("root", tuple(branches)))
        results = [
            evaluate_tree(
                tree, delivery_utility, delivery_wset, planning=planning, menu_policy=policy
            )
            for planning in ("ex-ante", "sophisticated")
            for policy in ("full", "viable")
        ]
        chosen = {r.chosen.name for r in results}
        assert len(chosen) == 1
        # a one-decision tree is the flat problem: scores must match rank()
        reference = results[0]
        menu = Menu([p.act for p in reference.plans])
        ranking = rank("mwer", menu, reference.utility, delivery_wset)
        for result in results:
            assert result.diagnostics[-1].scores == ranking.scores
        assert chosen == {ranking.best[0]}

    def test_tie_break_is_lexicographic_and_reported(self):
        states = ("a", "b")
        u = UtilitySpec({"hi": 1, "lo": -1})
        wset = WeightedMeasureSet(
            [(point_mass("a", states), 1), (point_mass("b", states), 1)], states
        )
        tree = DecisionTree(
            DecisionNode(
                "pick",
                (
                    ("left", Leaf(utility=F(1, 2))),
                    ("right", Leaf(utility=F(1, 2))),
                ),
            )
        )
        result = evaluate_tree(tree, u, wset, planning="sophisticated")
        assert result.survivors == ("left", "right")
        assert result.chosen.name == "left"

    def test_malformed_partitions_rejected(self):
        states = ("a", "b")
        u = UtilitySpec({"hi": 1, "lo": -1})
        wset = WeightedMeasureSet([(point_mass("a", states), 1)], states)
        overlapping = DecisionTree(
            NatureNode(
                (
                    (Event(["a", "b"]), Leaf(utility=F(0))),
                    (Event(["b"]), Leaf(utility=F(1))),
                )
            )
        )
        with pytest.raises(MalformedTree, match="overlap"):
            evaluate_tree(overlapping, u, wset)
        incomplete = DecisionTree(NatureNode(((Event(["a"]), Leaf(utility=F(0))),)))
        with pytest.raises(MalformedTree, match="misses"):
            evaluate_tree(incomplete, u, wset)
        duplicated = DecisionTree(
            DecisionNode(
                "d",
                (
                    ("x", DecisionNode("d", (("y", Leaf(utility=F(0))),))),
                ),
            )
        )
        with pytest.raises(MalformedTree, match="duplicate"):
            evaluate_tree(duplicated, u, wset)

    def test_null_information_set_rejected(self):
        states = ("a", "b")
        u = UtilitySpec({"hi": 1, "lo": -1})
        wset = WeightedMeasureSet([(point_mass("a", states), 1)], states)
        tree = DecisionTree(
            NatureNode(
                (
                    (Event(["a"]), Leaf(utility=F(0))),
                    (Event(["b"]), DecisionNode("dead", (("x", Leaf(utility=F(0))), ("y", Leaf(utility=F(1)))))),
                )
            )
        )
        with pytest.raises(NullEventAtNode):
            evaluate_tree(tree, u, wset, planning="sophisticated")
