"""The axiom checker: curated counterexamples, sampling, determinism."""

from fractions import Fraction

import pytest

from wregret.axioms import (
    AxiomReport,
    GeneratorConfig,
    axiom_matrix,
    check_axiom,
    delivery_fixtures,
    replay,
    value_lottery,
)
from wregret.errors import UnknownAxiom

F = Fraction


@pytest.fixture(scope="module")
def fixtures():
    return delivery_fixtures()


SMALL = GeneratorConfig(samples=60)


class TestCuratedCorpus:
    def test_constant_mix_violated_for_weighted_regret(self, fixtures):
        report = check_axiom("12", fixtures.oracle("mwer"), SMALL, seed=0)
        assert report.verdict == "violated"
        w = report.counterexample
        assert w.kind == "violation"
        assert "known" in w.description
        assert w.acts["f"].name == "cont" and w.acts["h"].name == "back"
        assert w.params["p"] == F(1, 2)
        assert w.scores == {"f": F(10000), "h": F(10000), "mixture": F(7500)}

    def test_unrestricted_variant_violated_for_plain_regret_rule(self, fixtures):
        report = check_axiom("12u", fixtures.oracle("mer"), SMALL, seed=0)
        assert report.verdict == "violated"
        assert report.counterexample.scores == {
            "f": F(10000), "h": F(10000), "mixture": F(5000),
        }

    def test_menu_dependence_flagged_for_regret_family(self, fixtures):
        for rule in ("regret", "mer", "mwer"):
            report = check_axiom("menu", fixtures.oracle(rule), SMALL, seed=0)
            assert report.verdict == "violated", rule
            assert "known" in report.counterexample.description

    def test_menu_independence_holds_for_utility_family(self, fixtures):
        for rule in ("seu", "mmeu"):
            report = check_axiom("menu", fixtures.oracle(rule), GeneratorConfig(samples=150), seed=0)
            assert report.verdict == "no-violation-found", rule

    def test_independence_violated_for_worst_case_utility(self, fixtures):
        report = check_axiom("7", fixtures.oracle("mmeu"), SMALL, seed=0)
        assert report.verdict == "violated"
        assert report.counterexample.scores["f"] == 0
        assert report.counterexample.scores["g"] == F(2, 5)
        assert report.counterexample.scores["mixed_f"] == F(1, 2)
        assert report.counterexample.scores["mixed_g"] == F(1, 5)


class TestReplay:
    @pytest.mark.parametrize(
        "axiom,rule",
        [("12", "mwer"), ("12u", "mer"), ("menu", "mer"), ("7", "mmeu")],
    )
    def test_violations_replay(self, fixtures, axiom, rule):
        oracle = fixtures.oracle(rule)
        report = check_axiom(axiom, oracle, SMALL, seed=0)
        assert report.verdict == "violated"
        assert replay(report, oracle)

    def test_clean_reports_do_not_replay(self, fixtures):
        report = check_axiom("1", fixtures.oracle("mwer"), SMALL, seed=0)
        assert report.verdict == "no-violation-found"
        assert not replay(report, fixtures.oracle("mwer"))


class TestSampling:
    def test_unknown_axiom(self, fixtures):
        with pytest.raises(UnknownAxiom):
            check_axiom("13", fixtures.oracle("mer"))

    def test_determinism(self, fixtures):
        a = check_axiom("6", fixtures.oracle("mwer"), SMALL, seed=42)
        b = check_axiom("6", fixtures.oracle("mwer"), SMALL, seed=42)
        assert a.to_obj() == b.to_obj()

    def test_structural_axioms_pass_once(self, fixtures):
        for axiom in ("3", "10"):
            report = check_axiom(axiom, fixtures.oracle("mwer"), SMALL, seed=0)
            assert report.verdict == "no-violation-found"
            assert report.samples == 1

    @pytest.mark.parametrize("rule", ["seu", "regret", "mer", "mwer", "mmeu"])
    def test_transitivity_never_violated(self, fixtures, rule):
        report = check_axiom("1", fixtures.oracle(rule), GeneratorConfig(samples=300), seed=7)
        assert report.verdict == "no-violation-found"
        assert report.applicable > 0

    def test_restricted_constant_mix_clean_for_unweighted_regret(self, fixtures):
        report = check_axiom("12", fixtures.oracle("mer"), GeneratorConfig(samples=200), seed=3)
        assert report.verdict == "no-violation-found"

    def test_mixture_continuity_vocabulary(self, fixtures):
        report = check_axiom("5", fixtures.oracle("mer"), GeneratorConfig(samples=120), seed=11)
        assert report.verdict in ("no-violation-found",)
        assert report.unwitnessed >= 0
        if report.unwitnessed:
            assert report.unwitnessed_example.kind == "no-witness-in-grid"

    def test_reports_carry_counts_and_seed(self, fixtures):
        report = check_axiom("4", fixtures.oracle("mer"), SMALL, seed=9)
        assert isinstance(report, AxiomReport)
        assert report.samples == 60
        assert report.seed == 9
        obj = report.to_obj()
        assert obj["axiom"] == "4" and obj["rule"] == "mer"


class TestOracle:
    def test_compare_is_antisymmetric(self, fixtures):
        oracle = fixtures.oracle("mwer")
        from wregret import Menu
        from wregret.axioms import profile_act

        f = profile_act("f", {"one_broken": F(1), "ten_broken": F(0)}, fixtures.utility)
        g = profile_act("g", {"one_broken": F(0), "ten_broken": F(1)}, fixtures.utility)
        menu = Menu([f, g])
        assert oracle.compare(f, g, menu) == -oracle.compare(g, f, menu)

    def test_value_lottery_hits_exact_utilities(self, fixtures):
        u = fixtures.utility
        for v in (F(-1), F(0), F(7, 10), F(5000)):
            lottery = value_lottery(v, u)
            assert u.utility(lottery) == v


class TestMatrix:
    def test_small_matrix_matches_known_pattern(self, fixtures):
        matrix = axiom_matrix(fixtures=fixtures, seed=0, config=GeneratorConfig(samples=60))
        cells = matrix.cells
        assert cells[("mwer", "ax12")] == "violated"
        assert cells[("mmeu", "independence")] == "violated"
        for rule in ("seu", "regret", "mer"):
            for column in ("ax1-6,8-10", "independence", "c-independence", "ax12"):
                assert cells[(rule, column)] == "no-violation-found", (rule, column)
        assert cells[("mwer", "independence")] == "no-violation-found"
        assert cells[("mwer", "c-independence")] == "no-violation-found"
        assert cells[("mmeu", "ax12")] == "no-violation-found"
        text = matrix.to_text()
        assert "VIOLATED" in text and text.splitlines()[0].startswith("rule")
