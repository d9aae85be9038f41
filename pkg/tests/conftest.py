"""Shared builders for the delivery problem and random belief generation."""

from __future__ import annotations

import random
from fractions import Fraction

import pytest

from wregret import (
    Act,
    Measure,
    Menu,
    UtilitySpec,
    WeightedMeasureSet,
    normalize,
    point_mass,
    sure,
)

DELIVERY_STATES = ("one_broken", "ten_broken")


@pytest.fixture(scope="session")
def delivery_utility() -> UtilitySpec:
    return UtilitySpec(
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


def pair_act(name: str, one, ten) -> Act:
    """Delivery act paying `one` in the one-broken class and `ten` in the other."""
    prize_of = {
        10000: "full_fee", 0: "nothing", -10000: "penalty",
        5001: "checked_fee", -4999: "checked_penalty",
        20000: "double_fee", -20000: "double_penalty",
    }
    return Act(
        name,
        {"one_broken": sure(prize_of[one]), "ten_broken": sure(prize_of[ten])},
    )


@pytest.fixture(scope="session")
def delivery_acts() -> dict[str, Act]:
    return {
        "cont": pair_act("cont", 10000, -10000),
        "back": pair_act("back", 0, 0),
        "check": pair_act("check", 5001, -4999),
        "new": pair_act("new", 20000, -20000),
    }


@pytest.fixture(scope="session")
def base_menu(delivery_acts) -> Menu:
    return Menu([delivery_acts["cont"], delivery_acts["back"], delivery_acts["check"]])


@pytest.fixture(scope="session")
def extended_menu(delivery_acts) -> Menu:
    return Menu(
        [delivery_acts[n] for n in ("cont", "back", "check", "new")]
    )


@pytest.fixture(scope="session")
def delivery_measures() -> tuple[Measure, Measure]:
    return (
        point_mass("one_broken", DELIVERY_STATES),
        point_mass("ten_broken", DELIVERY_STATES),
    )


@pytest.fixture(scope="session")
def delivery_wset(delivery_measures) -> WeightedMeasureSet:
    one, ten = delivery_measures
    return WeightedMeasureSet([(one, 1), (ten, Fraction(1, 2))], DELIVERY_STATES)


def random_measure(rng: random.Random, states, grain: int = 12) -> Measure:
    """Uniform-ish random rational measure via sorted cuts of a grain."""
    cuts = sorted(rng.randint(0, grain) for _ in range(len(states) - 1))
    probs = {}
    prev = 0
    for state, cut in zip(states, list(cuts) + [grain]):
        probs[state] = Fraction(cut - prev, grain)
        prev = cut
    return Measure(probs)


def random_wset(rng: random.Random, states, max_measures: int = 3) -> WeightedMeasureSet:
    n = rng.randint(1, max_measures)
    entries = [
        (random_measure(rng, states), Fraction(rng.randint(1, 4), 4)) for _ in range(n)
    ]
    return normalize(WeightedMeasureSet(entries, states))
