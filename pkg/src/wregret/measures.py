"""Weighted sets of probability measures and their sub-probability geometry.

The core representation is a finite set of (measure, weight) pairs with
weights in [0, 1], normalized so the largest weight is exactly 1.  Updating
on an event conditions each measure and rescales its weight by the relative
likelihood of the event.  The same information can be viewed geometrically:
each pair (Pr, w) spans the segment of sub-probability vectors from 0 to
w*Pr, and the downward-closed convex hull of those segments is the canonical
object behind worst-case weighted regret.  All arithmetic is exact.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Callable, Iterable, Mapping, Sequence, Union

from .errors import (
    AllZeroWeights,
    DimensionMismatch,
    EmptySet,
    NegativeDirection,
    NoInformativeDirection,
    UndefinedUpdate,
)
from .linfeas import in_downward_convex_hull
from .rational import format_rational

Rational = Union[Fraction, int, str]

ZERO = Fraction(0)
ONE = Fraction(1)


def _as_fraction(value: Rational) -> Fraction:
    return Fraction(value)


class Event:
    """A subset of state labels."""

    __slots__ = ("_members",)

    def __init__(self, members: Iterable[str]):
        self._members = frozenset(members)

    @property
    def members(self) -> frozenset[str]:
        return self._members

    def __contains__(self, state: str) -> bool:
        return state in self._members

    def __and__(self, other: "Event") -> "Event":
        return Event(self._members & other._members)

    def __or__(self, other: "Event") -> "Event":
        return Event(self._members | other._members)

    def complement(self, state_space: Sequence[str]) -> "Event":
        return Event(set(state_space) - self._members)

    def __eq__(self, other: object) -> bool:
        return isinstance(other, Event) and self._members == other._members

    def __hash__(self) -> int:
        return hash(self._members)

    def __repr__(self) -> str:
        return f"Event({{{', '.join(sorted(self._members))}}})"


EventLike = Union[Event, Iterable[str]]


def _as_event(event: EventLike) -> Event:
    return event if isinstance(event, Event) else Event(event)


class Measure:
    """A probability measure on a finite state space.

    The mapping is total: every state of the ambient space appears, possibly
    with probability zero, and the values sum to exactly one.
    """

    __slots__ = ("_probs", "_items")

    def __init__(self, probs: Mapping[str, Rational]):
        converted = {state: _as_fraction(p) for state, p in probs.items()}
        for state, p in converted.items():
            if p < 0:
                raise ValueError(f"negative probability {p} for state {state!r}")
        total = sum(converted.values(), ZERO)
        if total != 1:
            raise ValueError(f"probabilities sum to {format_rational(total)}, expected 1/1")
        self._probs = converted
        self._items = tuple(sorted(converted.items()))

    @property
    def state_space(self) -> tuple[str, ...]:
        return tuple(state for state, _ in self._items)

    def __getitem__(self, state: str) -> Fraction:
        return self._probs[state]

    def items(self) -> tuple[tuple[str, Fraction], ...]:
        return self._items

    def event_prob(self, event: EventLike) -> Fraction:
        event = _as_event(event)
        unknown = event.members - self._probs.keys()
        if unknown:
            raise DimensionMismatch(f"event mentions unknown states {sorted(unknown)}")
        return sum((self._probs[s] for s in event.members), ZERO)

    def condition(self, event: EventLike) -> "Measure":
        """Conditional measure given the event; requires positive probability."""
        event = _as_event(event)
        p_event = self.event_prob(event)
        if p_event == 0:
            raise UndefinedUpdate("cannot condition on a probability-zero event")
        return Measure(
            {s: (p / p_event if s in event else ZERO) for s, p in self._probs.items()}
        )

    def expectation(self, values: Mapping[str, Rational]) -> Fraction:
        total = ZERO
        for s, p in self._probs.items():
            if p:
                total += p * values[s]
        return Fraction(total)

    def __eq__(self, other: object) -> bool:
        return isinstance(other, Measure) and self._items == other._items

    def __hash__(self) -> int:
        return hash(self._items)

    def __repr__(self) -> str:
        inner = ", ".join(f"{s}: {format_rational(p)}" for s, p in self._items)
        return f"Measure({{{inner}}})"


def point_mass(state: str, state_space: Sequence[str]) -> Measure:
    """The measure concentrated on a single state."""
    return Measure({s: (ONE if s == state else ZERO) for s in state_space})


class WeightedMeasureSet:
    """A finite set of probability measures, each carrying a weight in [0, 1]."""

    __slots__ = ("_entries", "_states")

    def __init__(
        self,
        entries: Iterable[tuple[Measure, Rational]],
        state_space: Sequence[str] | None = None,
    ):
        entries = tuple((m, _as_fraction(w)) for m, w in entries)
        if not entries:
            raise EmptySet("a weighted measure set needs at least one entry")
        states = tuple(state_space) if state_space is not None else entries[0][0].state_space
        ordered = tuple(sorted(states))
        for measure, weight in entries:
            if measure.state_space != ordered:
                raise DimensionMismatch(
                    f"measure over {measure.state_space} does not match state space {ordered}"
                )
            if not (0 <= weight <= 1):
                raise ValueError(f"weight {weight} outside [0, 1]")
        self._entries = entries
        self._states = states

    @property
    def entries(self) -> tuple[tuple[Measure, Fraction], ...]:
        return self._entries

    @property
    def state_space(self) -> tuple[str, ...]:
        return self._states

    @property
    def is_normalized(self) -> bool:
        weights = [w for _, w in self._entries]
        measures = [m for m, _ in self._entries]
        return max(weights) == 1 and len(set(measures)) == len(measures)

    def _canonical(self) -> tuple:
        return tuple(sorted(((m.items(), w) for m, w in self._entries)))

    def __eq__(self, other: object) -> bool:
        return (
            isinstance(other, WeightedMeasureSet)
            and self._states == other._states
            and self._canonical() == other._canonical()
        )

    def __hash__(self) -> int:
        return hash((self._states, self._canonical()))

    def __repr__(self) -> str:
        inner = ", ".join(f"({m!r}, {format_rational(w)})" for m, w in self._entries)
        return f"WeightedMeasureSet([{inner}])"


def normalize(wset: WeightedMeasureSet) -> WeightedMeasureSet:
    """Rescale weights so the maximum is 1 and collapse duplicate measures.

    Duplicates keep the largest weight among their occurrences, mirroring the
    supremum in the updated-weight definition.
    """
    top = max(w for _, w in wset.entries)
    if top == 0:
        raise AllZeroWeights("cannot normalize a set whose weights are all zero")
    merged: dict[Measure, Fraction] = {}
    for measure, weight in wset.entries:
        scaled = weight / top
        if measure not in merged or merged[measure] < scaled:
            merged[measure] = scaled
    return WeightedMeasureSet(tuple(merged.items()), wset.state_space)


def upper_likelihood(wset: WeightedMeasureSet, event: EventLike) -> Fraction:
    """Largest weight-scaled probability of the event across the set."""
    event = _as_event(event)
    return max(w * m.event_prob(event) for m, w in wset.entries)


def likelihood_update(wset: WeightedMeasureSet, event: EventLike) -> WeightedMeasureSet:
    """Condition every measure on the event and rescale weights by likelihood.

    The weight of a conditioned measure is the largest weight * Pr(event)
    among the entries that condition to it, divided by the set's upper
    likelihood of the event.  Measures giving the event probability zero are
    dropped; the result is normalized.
    """
    event = _as_event(event)
    top = upper_likelihood(wset, event)
    if top == 0:
        raise UndefinedUpdate("update undefined: the event has upper likelihood 0")
    merged: dict[Measure, Fraction] = {}
    for measure, weight in wset.entries:
        p_event = measure.event_prob(event)
        if p_event == 0:
            continue
        conditioned = measure.condition(event)
        candidate = weight * p_event / top
        if conditioned not in merged or merged[conditioned] < candidate:
            merged[conditioned] = candidate
    return normalize(WeightedMeasureSet(tuple(merged.items()), wset.state_space))


def sequential_update(
    wset: WeightedMeasureSet, first: EventLike, second: EventLike
) -> WeightedMeasureSet:
    """Update on two events one after the other.

    Equals a single update on the intersection whenever that update is
    defined; the property suite exercises this identity.
    """
    first = _as_event(first)
    second = _as_event(second)
    if upper_likelihood(wset, first & second) == 0:
        raise UndefinedUpdate("update undefined: the intersection has upper likelihood 0")
    return likelihood_update(likelihood_update(wset, first), second)


class SubProbabilityVector:
    """Nonnegative mass per state, totalling at most one."""

    __slots__ = ("_values", "_items")

    def __init__(self, values: Mapping[str, Rational]):
        converted = {state: _as_fraction(v) for state, v in values.items()}
        for state, v in converted.items():
            if v < 0:
                raise ValueError(f"negative mass {v} for state {state!r}")
        if sum(converted.values(), ZERO) > 1:
            raise ValueError("sub-probability mass exceeds 1")
        self._values = converted
        self._items = tuple(sorted(converted.items()))

    @property
    def state_space(self) -> tuple[str, ...]:
        return tuple(state for state, _ in self._items)

    def __getitem__(self, state: str) -> Fraction:
        return self._values[state]

    def items(self) -> tuple[tuple[str, Fraction], ...]:
        return self._items

    def total(self) -> Fraction:
        return sum(self._values.values(), ZERO)

    def dot(self, direction: Mapping[str, Rational]) -> Fraction:
        return sum(
            (self._values[s] * _as_fraction(direction[s]) for s in self._values), ZERO
        )

    def vector(self, order: Sequence[str]) -> list[Fraction]:
        return [self._values[s] for s in order]

    def __eq__(self, other: object) -> bool:
        return isinstance(other, SubProbabilityVector) and self._items == other._items

    def __hash__(self) -> int:
        return hash(self._items)

    def __repr__(self) -> str:
        inner = ", ".join(f"{s}: {format_rational(v)}" for s, v in self._items)
        return f"SubProbabilityVector({{{inner}}})"


class RegularHull:
    """Generator view of a downward-closed convex set of sub-probability vectors.

    Only the maximal points are stored; the represented set is the downward
    closure of their convex hull.  At least one generator must be a proper
    probability measure (total mass one).
    """

    __slots__ = ("_generators", "_states")

    def __init__(self, generators: Iterable[SubProbabilityVector], state_space: Sequence[str]):
        generators = tuple(generators)
        states = tuple(state_space)
        ordered = tuple(sorted(states))
        if not generators:
            raise EmptySet("a hull needs at least one generator")
        for g in generators:
            if g.state_space != ordered:
                raise DimensionMismatch(
                    f"generator over {g.state_space} does not match state space {ordered}"
                )
        if all(g.total() != 1 for g in generators):
            raise ValueError("a regular hull must contain a proper probability measure")
        self._generators = generators
        self._states = states

    @property
    def generators(self) -> tuple[SubProbabilityVector, ...]:
        return self._generators

    @property
    def state_space(self) -> tuple[str, ...]:
        return self._states

    def __repr__(self) -> str:
        return f"RegularHull({len(self._generators)} generators over {self._states})"


def _prune_generators(
    generators: Sequence[SubProbabilityVector], order: Sequence[str]
) -> tuple[SubProbabilityVector, ...]:
    """Drop generators lying in the downward-convex hull of the others.

    Removing a dominated generator never shrinks the represented set, so
    sequential pruning against the current survivors is sound.
    """
    unique = sorted(set(generators), key=lambda g: g.items())
    survivors = list(unique)
    for g in list(unique):
        others = [h for h in survivors if h is not g]
        if others and in_downward_convex_hull(
            g.vector(order), [h.vector(order) for h in others]
        ):
            survivors = others
    return tuple(survivors)


def to_hull(wset: WeightedMeasureSet) -> RegularHull:
    """The pruned generator representation spanned by weight * measure points."""
    order = tuple(sorted(wset.state_space))
    raw = [
        SubProbabilityVector({s: w * m[s] for s in wset.state_space})
        for m, w in wset.entries
    ]
    return RegularHull(_prune_generators(raw, order), wset.state_space)


def support_value(hull: RegularHull, direction: Mapping[str, Rational]) -> Fraction:
    """Maximum inner product with a nonnegative direction.

    For nonnegative directions the maximum over the downward-convex closure
    is attained at a generator, so no optimization is needed.
    """
    converted = {s: _as_fraction(v) for s, v in direction.items()}
    if set(converted) != set(hull.state_space):
        raise DimensionMismatch("direction does not cover the hull's state space")
    for state, v in converted.items():
        if v < 0:
            raise NegativeDirection(f"direction component for {state!r} is negative")
    return max(g.dot(converted) for g in hull.generators)


def hull_equal(first: RegularHull, second: RegularHull) -> bool:
    """Do two hulls represent the same downward-closed convex set?

    Checked by exact mutual containment of the pruned generator sets in the
    other hull's downward-convex closure.
    """
    if sorted(first.state_space) != sorted(second.state_space):
        raise DimensionMismatch("hulls are defined over different state spaces")
    order = tuple(sorted(first.state_space))
    gens_a = _prune_generators(first.generators, order)
    gens_b = _prune_generators(second.generators, order)
    vecs_a = [g.vector(order) for g in gens_a]
    vecs_b = [g.vector(order) for g in gens_b]
    return all(in_downward_convex_hull(v, vecs_b) for v in vecs_a) and all(
        in_downward_convex_hull(v, vecs_a) for v in vecs_b
    )


def worst_weighted_regret_oracle(
    wset: WeightedMeasureSet,
) -> Callable[[Mapping[str, Rational]], Fraction]:
    """Worst-case weighted regret of a nonpositive utility vector.

    Against the menu of all nonpositive-utility acts, the per-state best is
    zero everywhere, so the regret profile of a vector b is simply -b and the
    worst-case weighted expected regret is max over entries of
    weight * (-E[b]).  This is the functional that weight recovery inverts.
    """

    def oracle(direction: Mapping[str, Rational]) -> Fraction:
        return max(w * -m.expectation(direction) for m, w in wset.entries)

    return oracle


def recover_weights(
    regret_oracle: Callable[[Mapping[str, Rational]], Fraction],
    candidates: Sequence[Measure],
    directions: Sequence[Mapping[str, Rational]],
) -> dict[Measure, Fraction]:
    """Recover canonical weights from a worst-case weighted regret oracle.

    For each candidate measure the canonical weight is the largest a with
    a * E[b] >= -oracle(b) for every nonpositive utility vector b.  Sampling
    directions gives the infimum of oracle(b) / (-E[b]) over directions with
    negative expectation: an upper approximation that shrinks monotonically
    as the direction sample grows.
    """
    checked: list[dict[str, Fraction]] = []
    for direction in directions:
        converted = {s: _as_fraction(v) for s, v in direction.items()}
        for state, v in converted.items():
            if v > 0 or v < -1:
                raise ValueError(
                    f"direction component for {state!r} must lie in [-1, 0], got {v}"
                )
        checked.append(converted)
    result: dict[Measure, Fraction] = {}
    for candidate in candidates:
        best: Fraction | None = None
        for direction in checked:
            expectation = candidate.expectation(direction)
            if expectation >= 0:
                continue
            ratio = regret_oracle(direction) / -expectation
            if best is None or ratio < best:
                best = ratio
        if best is None:
            raise NoInformativeDirection(
                f"no sampled direction has negative expectation under {candidate!r}"
            )
        result[candidate] = best
    return result


# -- canonical serialization ---------------------------------------------------

def measure_text(measure: Measure) -> str:
    inner = ", ".join(f"{s}: {format_rational(p)}" for s, p in measure.items())
    return f"{{ {inner} }}"


def weighted_set_text(wset: WeightedMeasureSet) -> str:
    """Byte-stable text form: states line plus one sorted line per entry."""
    lines = ["states: " + " ".join(sorted(wset.state_space))]
    entries = sorted(wset.entries, key=lambda mw: (mw[0].items(), mw[1]))
    for measure, weight in entries:
        lines.append(f"measure weight {format_rational(weight)} = {measure_text(measure)}")
    return "\n".join(lines) + "\n"


def hull_text(hull: RegularHull) -> str:
    lines = ["states: " + " ".join(sorted(hull.state_space))]
    for g in sorted(hull.generators, key=lambda g: g.items()):
        inner = ", ".join(f"{s}: {format_rational(v)}" for s, v in g.items())
        lines.append(f"generator = {{ {inner} }}")
    return "\n".join(lines) + "\n"
