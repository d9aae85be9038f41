"""Weight dynamics under repeated observations and threshold updating."""

import math
import statistics
from fractions import Fraction
from math import comb

import pytest

from wregret import Event, Lottery, Measure, Menu, UtilitySpec
from wregret.decisions import Act
from wregret.errors import AllEliminated
from wregret.learning import (
    ObservationModel,
    Probe,
    compare_updaters,
    cupcake_weight,
    es_update,
    simulate,
)

F = Fraction


def binary_ingredients():
    """Mostly-good truth vs fair coin, with a probe whose worst-case ranking
    starts out disagreeing with expected utility under the truth."""
    u = UtilitySpec({"double": 2, "refund": -2, "premium": F(9, 10)})
    risky = Act("risky", {"good": Lottery({"double": 1}), "bad": Lottery({"refund": 1})})
    steady = Act("steady", {"good": Lottery({"premium": 1}), "bad": Lottery({"premium": 1})})
    menu = Menu([risky, steady])
    measures = {
        "mostly_good": Measure({"good": F(9, 10), "bad": F(1, 10)}),
        "coin": Measure({"good": F(1, 2), "bad": F(1, 2)}),
    }
    model = ObservationModel(
        ("good", "bad"), {k: dict(m.items()) for k, m in measures.items()}, "mostly_good"
    )
    return model, Probe(menu, u, measures), {"mostly_good": 1, "coin": 1}


class TestSimulate:
    def test_zero_likelihood_kills_weight_in_one_round(self):
        u = UtilitySpec({"hi": 1, "lo": -1})
        act = Act("only", {"good": Lottery({"hi": 1}), "bad": Lottery({"lo": 1})})
        other = Act("other", {"good": Lottery({"lo": 1}), "bad": Lottery({"hi": 1})})
        measures = {
            "always_good": Measure({"good": 1, "bad": 0}),
            "always_bad": Measure({"good": 0, "bad": 1}),
        }
        model = ObservationModel(
            ("good", "bad"),
            {k: dict(m.items()) for k, m in measures.items()},
            "always_good",
        )
        probe = Probe(Menu([act, other]), u, measures)
        trajectory = simulate(model, {"always_good": 1, "always_bad": 1}, probe, 3, seed=0)
        assert trajectory.rows[0].weights == {"always_good": 1.0, "always_bad": 1.0}
        assert trajectory.rows[1].weights["always_bad"] == 0.0
        assert trajectory.rows[1].outcome == "good"

    def test_identical_hypotheses_keep_weight_one(self):
        u = UtilitySpec({"hi": 1, "lo": -1})
        act = Act("a", {"good": Lottery({"hi": 1}), "bad": Lottery({"lo": 1})})
        coin = {"good": F(1, 2), "bad": F(1, 2)}
        measures = {"h1": Measure(coin), "h2": Measure(coin)}
        model = ObservationModel(("good", "bad"), {"h1": coin, "h2": coin}, "h1")
        probe = Probe(Menu([act]), u, measures)
        trajectory = simulate(model, {"h1": 1, "h2": 1}, probe, 50, seed=1)
        for row in trajectory.rows:
            assert row.weights == {"h1": 1.0, "h2": 1.0}

    def test_weights_are_exact_likelihood_ratio_products(self):
        # each weight is the history-likelihood ratio against the current
        # leader (product form); renormalization never pushes one above 1
        model, probe, prior = binary_ingredients()
        trajectory = simulate(model, prior, probe, 40, seed=11)
        log_like = {"coin": 0.0, "mostly_good": 0.0}
        for row in trajectory.rows:
            if row.outcome is None:
                continue
            for h in log_like:
                log_like[h] += math.log(float(model.likelihoods[h][row.outcome]))
            top = max(log_like.values())
            for h in log_like:
                assert row.weights[h] == pytest.approx(
                    math.exp(log_like[h] - top), rel=1e-12
                )
                assert row.weights[h] <= 1.0

    def test_pinned_median_settling_round(self):
        # regression: the round after which the worst-case ranking matches
        # the truth's expected-utility ranking for good, over 100 seeds
        model, probe, prior = binary_ingredients()
        settles = []
        for seed in range(100):
            trajectory = simulate(model, prior, probe, 60, seed=seed)
            last_mismatch = max(
                (row.round for row in trajectory.rows if not row.matches_truth_seu),
                default=-1,
            )
            settles.append(last_mismatch + 1)
        assert statistics.median(settles) == 1

    def test_prior_must_be_normalized(self):
        model, probe, _ = binary_ingredients()
        with pytest.raises(ValueError, match="normalized"):
            simulate(model, {"mostly_good": F(1, 2), "coin": F(1, 2)}, probe, 5, seed=0)

    def test_csv_shape(self):
        model, probe, prior = binary_ingredients()
        trajectory = simulate(model, prior, probe, 3, seed=0)
        lines = trajectory.to_csv().strip().split("\n")
        assert lines[0] == "round,weight_coin,weight_mostly_good,mwer_ranking,matches_truth_seu"
        assert len(lines) == 5  # header + rounds 0..3


class TestCupcakeWeight:
    def test_no_information_keeps_weight_one(self):
        assert cupcake_weight(0) == 1

    def test_zero_from_991(self):
        assert cupcake_weight(991) == 0
        assert cupcake_weight(1000) == 0

    def test_exact_value_at_100(self):
        expected = F(comb(900, 10) * 1000, comb(1000, 10) * 900)
        assert cupcake_weight(100) == expected
        assert cupcake_weight(100) < F(999 - 100, 999) ** 9

    def test_nonincreasing(self):
        values = [cupcake_weight(n) for n in range(0, 992, 7)]
        assert all(a >= b for a, b in zip(values, values[1:]))

    def test_bound_spot_checks(self):
        for n in (1, 50, 500, 990):
            assert cupcake_weight(n) < F(999 - n, 999) ** 9

    def test_domain(self):
        with pytest.raises(ValueError):
            cupcake_weight(-1)
        with pytest.raises(ValueError):
            cupcake_weight(1001)


class TestThresholdUpdating:
    def setup_method(self):
        self.states = ("one_good", "one_bad", "ten_good", "ten_bad")
        p_ten = F(comb(900, 10), comb(1000, 10))
        self.one = Measure(
            {"one_good": F(9, 10), "one_bad": F(1, 10), "ten_good": 0, "ten_bad": 0}
        )
        self.ten = Measure(
            {"one_good": 0, "one_bad": 0, "ten_good": p_ten, "ten_bad": 1 - p_ten}
        )
        self.event = Event(["one_good", "ten_good"])

    def test_low_threshold_is_pure_conditioning(self):
        survivors = es_update([self.one, self.ten], self.event, F(1, 100))
        assert survivors == (
            self.one.condition(self.event),
            self.ten.condition(self.event),
        )

    def test_half_threshold_eliminates_ten_broken(self):
        # exact rational comparison: the relative likelihood of the
        # ten-broken hypothesis is below one half
        relative = F(comb(900, 10) * 10, 9 * comb(1000, 10))
        assert relative < F(1, 2)
        survivors = es_update([self.one, self.ten], self.event, F(1, 2))
        assert survivors == (self.one.condition(self.event),)

    def test_threshold_near_one_keeps_only_maximizers(self):
        survivors = es_update([self.one, self.ten], self.event, F(99, 100))
        assert survivors == (self.one.condition(self.event),)

    def test_elimination_on_equality(self):
        # relative likelihood exactly at the threshold is eliminated
        a = Measure({"x": F(1, 2), "y": F(1, 2)})
        b = Measure({"x": F(1, 4), "y": F(3, 4)})
        survivors = es_update([a, b], Event(["x"]), F(1, 2))
        assert survivors == (a.condition(Event(["x"])),)

    def test_all_eliminated_is_defensive(self):
        a = Measure({"x": 1, "y": 0})
        with pytest.raises(AllEliminated):
            es_update([a], Event(["y"]), F(1, 2))

    def test_threshold_domain(self):
        a = Measure({"x": 1, "y": 0})
        for bad in (0, 1, F(3, 2)):
            with pytest.raises(ValueError):
                es_update([a], Event(["x"]), bad)


class TestCompareUpdaters:
    def test_identical_hypotheses_always_agree(self):
        u = UtilitySpec({"hi": 1, "lo": -1})
        act = Act("a", {"good": Lottery({"hi": 1}), "bad": Lottery({"lo": 1})})
        other = Act("b", {"good": Lottery({"lo": 1}), "bad": Lottery({"hi": 1})})
        coin = {"good": F(1, 2), "bad": F(1, 2)}
        measures = {"h1": Measure(coin), "h2": Measure(coin)}
        model = ObservationModel(("good", "bad"), {"h1": coin, "h2": coin}, "h1")
        probe = Probe(Menu([act, other]), u, measures)
        summary = compare_updaters(model, {"h1": 1, "h2": 1}, probe, 20, range(5), F(1, 2))
        for row in summary.rows:
            assert row.agree_all == 1.0

    def test_round_zero_always_agrees(self):
        model, probe, prior = binary_ingredients()
        summary = compare_updaters(model, prior, probe, 5, range(10), F(1, 2))
        assert summary.rows[0].agree_all == 1.0

    def test_asymptotic_agreement_when_alternative_dies(self):
        # the alternative assigns probability zero to an outcome the truth
        # produces, so every updating style eventually discards it
        u = UtilitySpec({"double": 2, "refund": -2, "premium": F(9, 10)})
        risky = Act("risky", {"good": Lottery({"double": 1}), "bad": Lottery({"refund": 1})})
        steady = Act("steady", {"good": Lottery({"premium": 1}), "bad": Lottery({"premium": 1})})
        measures = {
            "mostly_good": Measure({"good": F(9, 10), "bad": F(1, 10)}),
            "all_good": Measure({"good": 1, "bad": 0}),
        }
        model = ObservationModel(
            ("good", "bad"),
            {k: dict(m.items()) for k, m in measures.items()},
            "mostly_good",
        )
        probe = Probe(Menu([risky, steady]), u, measures)
        summary = compare_updaters(
            model, {"mostly_good": 1, "all_good": 1}, probe, 200, range(50), F(1, 2)
        )
        assert summary.rows[-1].agree_all == 1.0

    def test_csv_header(self):
        model, probe, prior = binary_ingredients()
        summary = compare_updaters(model, prior, probe, 2, range(2), F(1, 2))
        lines = summary.to_csv().strip().split("\n")
        assert lines[0] == "round,agree_mwer_mer,agree_mwer_es,agree_mer_es,agree_all"
        assert len(lines) == 4
