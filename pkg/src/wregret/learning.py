"""Repeated observations: weight dynamics and updating-rule comparisons.

A stable generating process is observed round by round; each hypothesis's
weight is multiplied by the likelihood of the drawn outcome and the vector
is renormalized to maximum one.  For i.i.d. models this per-round update
coincides with a single update on the full history event, so the worst-case
weighted regret ranking of a probe menu converges to the expected-utility
ranking under the true hypothesis as its weight approaches one.  Likelihood
products are accumulated in log space (500-round products underflow);
everything outside the simulation loop stays exact.

`es_update` implements the threshold alternative: condition every measure,
then eliminate those whose relative likelihood does not exceed a cutoff.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass
from fractions import Fraction
from math import comb
from typing import Iterable, Mapping, Sequence

from .decisions import Menu, UtilitySpec, regret_profile
from .errors import AllEliminated
from .measures import EventLike, Measure, _as_event
from .rational import format_rational

RNG_ALGORITHM = "mt19937"  # CPython's random.Random core generator


@dataclass(frozen=True)
class ObservationModel:
    """Per-hypothesis i.i.d. outcome distributions over a shared alphabet."""

    outcomes: tuple[str, ...]
    likelihoods: Mapping[str, Mapping[str, Fraction]]
    truth: str

    def __post_init__(self) -> None:
        if self.truth not in self.likelihoods:
            raise ValueError(f"truth {self.truth!r} is not a hypothesis")
        alphabet = set(self.outcomes)
        for hyp, dist in self.likelihoods.items():
            if set(dist) != alphabet:
                raise ValueError(f"hypothesis {hyp!r} uses a different outcome alphabet")
            total = sum((Fraction(p) for p in dist.values()), Fraction(0))
            if total != 1:
                raise ValueError(
                    f"outcome distribution of {hyp!r} sums to {format_rational(total)}"
                )

    @property
    def hypotheses(self) -> tuple[str, ...]:
        return tuple(sorted(self.likelihoods))


@dataclass(frozen=True)
class Probe:
    """A decision problem re-ranked every round under the evolving weights."""

    menu: Menu
    utility: UtilitySpec
    measures: Mapping[str, Measure]  # hypothesis -> state-level measure


@dataclass(frozen=True)
class TrajectoryRow:
    round: int
    weights: dict[str, float]
    mwer_groups: tuple[tuple[str, ...], ...]
    matches_truth_seu: bool
    outcome: str | None = None  # the observation that produced this row


@dataclass(frozen=True)
class Trajectory:
    seed: int
    rounds: int
    rng_algorithm: str
    truth: str
    hypotheses: tuple[str, ...]
    truth_seu_groups: tuple[tuple[str, ...], ...]
    rows: tuple[TrajectoryRow, ...]

    def final_weights(self) -> dict[str, float]:
        return dict(self.rows[-1].weights)

    def to_csv(self) -> str:
        header = ["round"] + [f"weight_{h}" for h in self.hypotheses] + [
            "mwer_ranking", "matches_truth_seu",
        ]
        lines = [",".join(header)]
        for row in self.rows:
            ranking = ">".join("|".join(group) for group in row.mwer_groups)
            cells = [str(row.round)]
            cells += [f"{row.weights[h]:.12g}" for h in self.hypotheses]
            cells += [ranking, str(int(row.matches_truth_seu))]
            lines.append(",".join(cells))
        return "\n".join(lines) + "\n"


def _score_groups(scores: Mapping[str, float], lower_is_better: bool = True) -> tuple[tuple[str, ...], ...]:
    ordered = sorted(scores.items(), key=lambda kv: (kv[1] if lower_is_better else -kv[1], kv[0]))
    groups: list[list[str]] = []
    last = None
    for name, score in ordered:
        if groups and score == last:
            groups[-1].append(name)
        else:
            groups.append([name])
            last = score
    return tuple(tuple(g) for g in groups)


class _ProbeTable:
    """Precomputed per-act expected regrets per hypothesis (floats for speed)."""

    def __init__(self, probe: Probe, hypotheses: Sequence[str]):
        self.hypotheses = tuple(hypotheses)
        self.act_names = tuple(a.name for a in probe.menu)
        self.expected_regret: dict[str, dict[str, float]] = {}
        for act in probe.menu:
            profile = regret_profile(act, probe.menu, probe.utility)
            self.expected_regret[act.name] = {
                h: float(probe.measures[h].expectation(profile)) for h in self.hypotheses
            }

    def mwer_groups(self, weights: Mapping[str, float]) -> tuple[tuple[str, ...], ...]:
        scores = {
            name: max(weights[h] * er[h] for h in self.hypotheses)
            for name, er in self.expected_regret.items()
        }
        return _score_groups(scores)

    def mer_groups(self, alive: Iterable[str]) -> tuple[tuple[str, ...], ...]:
        alive = tuple(alive)
        scores = {
            name: max(er[h] for h in alive) for name, er in self.expected_regret.items()
        }
        return _score_groups(scores)


def _truth_seu_groups(probe: Probe, truth: str) -> tuple[tuple[str, ...], ...]:
    measure = probe.measures[truth]
    scores = {
        act.name: -float(measure.expectation(act.utility_profile(probe.utility)))
        for act in probe.menu
    }
    return _score_groups(scores)  # negated utilities: lower is better


def _draw(rng: random.Random, model: ObservationModel) -> str:
    r = rng.random()
    acc = 0.0
    dist = model.likelihoods[model.truth]
    for outcome in model.outcomes:
        acc += float(dist[outcome])
        if r < acc:
            return outcome
    return model.outcomes[-1]


def _normalized_weights(log_weights: Mapping[str, float]) -> dict[str, float]:
    top = max(log_weights.values())
    return {
        h: (math.exp(lw - top) if lw != float("-inf") else 0.0)
        for h, lw in log_weights.items()
    }


def simulate(
    model: ObservationModel,
    prior: Mapping[str, Fraction | float | int],
    probe: Probe,
    rounds: int,
    seed: int = 0,
) -> Trajectory:
    """Draw `rounds` outcomes from the truth and track weights and rankings.

    Row 0 records the prior state before any observation.  Weights follow the
    multiplicative likelihood update with per-round renormalization, which
    for an i.i.d. model equals a single update on the whole history.
    """
    if rounds < 1:
        raise ValueError("rounds must be at least 1")
    hypotheses = model.hypotheses
    if set(prior) != set(hypotheses):
        raise ValueError("prior weights must cover exactly the model's hypotheses")
    if max(float(w) for w in prior.values()) != 1.0:
        raise ValueError("prior weights must be normalized (maximum weight 1)")
    table = _ProbeTable(probe, hypotheses)
    truth_groups = _truth_seu_groups(probe, model.truth)
    rng = random.Random(seed)

    log_weights = {
        h: (math.log(float(prior[h])) if float(prior[h]) > 0 else float("-inf"))
        for h in hypotheses
    }
    rows = []

    def record(round_index: int, outcome: str | None) -> None:
        weights = _normalized_weights(log_weights)
        groups = table.mwer_groups(weights)
        rows.append(
            TrajectoryRow(round_index, weights, groups, groups == truth_groups, outcome)
        )

    record(0, None)
    for round_index in range(1, rounds + 1):
        outcome = _draw(rng, model)
        for h in hypotheses:
            p = float(model.likelihoods[h][outcome])
            log_weights[h] = log_weights[h] + math.log(p) if p > 0 else float("-inf")
        record(round_index, outcome)
    return Trajectory(
        seed=seed,
        rounds=rounds,
        rng_algorithm=RNG_ALGORITHM,
        truth=model.truth,
        hypotheses=hypotheses,
        truth_seu_groups=truth_groups,
        rows=tuple(rows),
    )


def cupcake_weight(n: int) -> Fraction:
    """Exact posterior weight of the ten-broken hypothesis after seeing the
    first n items good, in the thousand-item delivery problem.

    The one-broken hypothesis keeps weight one; the ten-broken hypothesis's
    relative likelihood is C(1000-n, 10)/C(1000, 10) * 1000/(1000-n), which
    hits zero once fewer than ten unseen items remain (n >= 991).
    """
    if not 0 <= n <= 1000:
        raise ValueError("n must lie in [0, 1000]")
    if n >= 991:
        return Fraction(0)
    return Fraction(comb(1000 - n, 10), comb(1000, 10)) * Fraction(1000, 1000 - n)


def es_update(
    measures: Iterable[Measure], event: EventLike, threshold: Fraction | float
) -> tuple[Measure, ...]:
    """Threshold updating: condition, then drop relatively unlikely measures.

    Each measure's relative likelihood is Pr(event) divided by the maximum
    over the set; measures whose relative likelihood does not exceed the
    threshold (elimination on equality) are removed, the rest conditioned.
    The output is unweighted and deduplicated.
    """
    threshold = Fraction(threshold)
    if not 0 < threshold < 1:
        raise ValueError("threshold must lie strictly between 0 and 1")
    event = _as_event(event)
    measures = tuple(measures)
    if not measures:
        raise AllEliminated("no measures to update")
    likelihoods = [m.event_prob(event) for m in measures]
    top = max(likelihoods)
    if top == 0:
        raise AllEliminated("every measure gives the event probability zero")
    survivors: list[Measure] = []
    for measure, likelihood in zip(measures, likelihoods):
        if likelihood / top > threshold:
            conditioned = measure.condition(event)
            if conditioned not in survivors:
                survivors.append(conditioned)
    if not survivors:
        raise AllEliminated("threshold eliminated every measure")
    return tuple(survivors)


@dataclass(frozen=True)
class ComparisonRow:
    round: int
    agree_mwer_mer: float
    agree_mwer_es: float
    agree_mer_es: float
    agree_all: float


@dataclass(frozen=True)
class ComparisonSummary:
    rounds: int
    seeds: tuple[int, ...]
    threshold: Fraction
    rows: tuple[ComparisonRow, ...]

    def to_csv(self) -> str:
        lines = ["round,agree_mwer_mer,agree_mwer_es,agree_mer_es,agree_all"]
        for row in self.rows:
            lines.append(
                f"{row.round},{row.agree_mwer_mer:.6f},{row.agree_mwer_es:.6f},"
                f"{row.agree_mer_es:.6f},{row.agree_all:.6f}"
            )
        return "\n".join(lines) + "\n"


def compare_updaters(
    model: ObservationModel,
    prior: Mapping[str, Fraction | float | int],
    probe: Probe,
    rounds: int,
    seeds: Sequence[int],
    threshold: Fraction | float = Fraction(1, 2),
) -> ComparisonSummary:
    """Per-round ranking agreement between three updating styles.

    The three probe rankings compared each round: weighted regret under
    likelihood updating, unweighted worst-case expected regret keeping every
    hypothesis with positive history likelihood, and the same after
    threshold elimination (relative likelihood must exceed the threshold).
    Agreement is exact equality of the ranked groups, averaged over seeds.
    """
    threshold = Fraction(threshold)
    if not 0 < threshold < 1:
        raise ValueError("threshold must lie strictly between 0 and 1")
    hypotheses = model.hypotheses
    table = _ProbeTable(probe, hypotheses)
    thr = float(threshold)
    counts = [[0, 0, 0, 0] for _ in range(rounds + 1)]
    for seed in seeds:
        trajectory = simulate(model, prior, probe, rounds, seed)
        for row in trajectory.rows:
            weights = row.weights
            mwer_groups = row.mwer_groups
            alive = [h for h in hypotheses if weights[h] > 0]
            mer_groups = table.mer_groups(alive)
            es_alive = [h for h in hypotheses if weights[h] > thr]
            es_groups = table.mer_groups(es_alive)
            a = mwer_groups == mer_groups
            b = mwer_groups == es_groups
            c = mer_groups == es_groups
            counts[row.round][0] += a
            counts[row.round][1] += b
            counts[row.round][2] += c
            counts[row.round][3] += a and b and c
    total = len(seeds)
    rows = tuple(
        ComparisonRow(
            r,
            counts[r][0] / total,
            counts[r][1] / total,
            counts[r][2] / total,
            counts[r][3] / total,
        )
        for r in range(rounds + 1)
    )
    return ComparisonSummary(rounds, tuple(seeds), threshold, rows)
