"""Priors, general set functions, type mappings, and the order sets they induce.

All numeric values are exact rationals.  A set function stores one value per
event of its algebra, indexed by the canonical event order, so "for all
events" is a literal loop over the table.  Nothing here assumes additivity:
capacities and arbitrary [0,1]-valued tables are first-class, and their
properties are established by classification, never by construction.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from typing import Callable, Iterable, Mapping

from .errors import (
    AlgebraMismatch,
    ConditioningOnNull,
    IncompleteCapacity,
    NotMeasurable,
    PriorNotNormalized,
    RationalOutOfRange,
)
from .events import Event, SigmaAlgebra
from .reports import CheckReport, Witness

ZERO = Fraction(0)
ONE = Fraction(1)


def as_fraction(value) -> Fraction:
    """Coerce to an exact rational; floats are rejected to keep arithmetic exact."""
    if isinstance(value, float):
        raise TypeError(f"floats are not exact, got {value!r}; use Fraction or 'p/q'")
    return Fraction(value)


@dataclass(frozen=True)
class Prior:
    """A countably additive probability measure, stored as one weight per atom."""

    sigma: SigmaAlgebra
    weights: tuple[Fraction, ...]

    def __post_init__(self):
        weights = tuple(as_fraction(w) for w in self.weights)
        object.__setattr__(self, "weights", weights)
        if len(weights) != self.sigma.n_atoms:
            raise PriorNotNormalized(
                f"expected {self.sigma.n_atoms} atom weights, got {len(weights)}"
            )
        if any(w < 0 for w in weights):
            raise PriorNotNormalized("prior weights must be nonnegative")
        if sum(weights) != 1:
            raise PriorNotNormalized(f"prior weights sum to {sum(weights)}, not 1")

    @cached_property
    def combo_table(self) -> tuple[Fraction, ...]:
        """Measure of every event, indexed by canonical event order."""
        k = self.sigma.n_atoms
        table = [ZERO] * (1 << k)
        for idx in range(1, 1 << k):
            low = idx & -idx
            table[idx] = table[idx ^ low] + self.weights[low.bit_length() - 1]
        return tuple(table)

    def measure_mask(self, mask: int) -> Fraction:
        return self.combo_table[self.sigma.combo_index(mask)]

    def measure_of(self, event: Event) -> Fraction:
        if event.sigma is not self.sigma and event.sigma != self.sigma:
            raise AlgebraMismatch("event and prior use different sigma-algebras")
        return self.measure_mask(event.mask)

    def to_set_function(self) -> "SetFunction":
        return SetFunction(self.sigma, self.combo_table)


def uniform_prior(sigma: SigmaAlgebra) -> Prior:
    k = sigma.n_atoms
    return Prior(sigma, tuple(Fraction(1, k) for _ in range(k)))


def prior_from_state_weights(sigma: SigmaAlgebra, weights: Mapping[str, Fraction]) -> Prior:
    """Build a prior from one weight per atom, keyed by any member state."""
    per_atom: dict[int, Fraction] = {}
    for name, w in weights.items():
        j = sigma.atom_index_of_state[sigma.space.index[name]]
        if j in per_atom:
            raise PriorNotNormalized(f"atom containing {name!r} given two weights")
        per_atom[j] = as_fraction(w)
    missing = [j for j in range(sigma.n_atoms) if j not in per_atom]
    if missing:
        raise PriorNotNormalized(f"missing weight for atom index {missing[0]}")
    return Prior(sigma, tuple(per_atom[j] for j in range(sigma.n_atoms)))


def measure_of(prior: Prior, event: Event) -> Fraction:
    return prior.measure_of(event)


def conditional(prior: Prior, e: Event, given: Event) -> Fraction:
    """mu(e | given); conditioning on a null event is undefined."""
    denom = prior.measure_of(given)
    if denom == 0:
        raise ConditioningOnNull(f"mu({given!r}) = 0")
    return prior.measure_of(e.intersect(given)) / denom


def almost_contains(prior: Prior, e: Event, f: Event) -> bool:
    """e is contained in f up to a mu-null set: mu(e \\ f) = 0."""
    return prior.measure_of(e.difference(f)) == 0


def almost_equal(prior: Prior, e: Event, f: Event) -> bool:
    """e and f agree up to a mu-null set: mu(e symdiff f) = 0."""
    return prior.measure_of(e.symmetric_difference(f)) == 0


def expectation(prior: Prior, f: Callable[[str], Fraction] | Mapping[str, Fraction]) -> Fraction:
    """Integral of a measurable (atom-constant) function against the prior."""
    get = f.__getitem__ if isinstance(f, Mapping) else f
    space = prior.sigma.space
    total = ZERO
    for j, atom in enumerate(prior.sigma.atoms):
        members = space.names_of(atom)
        value = as_fraction(get(members[0]))
        for other in members[1:]:
            if as_fraction(get(other)) != value:
                raise NotMeasurable(
                    f"function is not constant on atom {members}: "
                    f"f({members[0]})={value} but f({other})={get(other)}"
                )
        total += value * prior.weights[j]
    return total


@dataclass(frozen=True)
class Classification:
    """Which structural properties a set function satisfies on its algebra."""

    normalized: bool
    monotone: bool
    additive: bool
    convex: bool
    one_intersection: bool

    @property
    def is_probability_measure(self) -> bool:
        return self.normalized and self.additive


@dataclass(frozen=True)
class SetFunction:
    """An arbitrary [0,1]-valued function on the events of a sigma-algebra.

    table[i] is the value at the i-th event in canonical order.  The value at
    the empty event is *not* assumed to be zero.
    """

    sigma: SigmaAlgebra
    table: tuple[Fraction, ...]

    def __post_init__(self):
        table = tuple(as_fraction(v) for v in self.table)
        object.__setattr__(self, "table", table)
        if len(table) != (1 << self.sigma.n_atoms):
            raise IncompleteCapacity(
                f"expected {1 << self.sigma.n_atoms} event values, got {len(table)}"
            )
        for v in table:
            if v < 0 or v > 1:
                raise RationalOutOfRange(f"set-function value {v} outside [0, 1]")

    def value(self, event: Event) -> Fraction:
        if event.sigma is not self.sigma and event.sigma != self.sigma:
            raise AlgebraMismatch("event and set function use different sigma-algebras")
        return self.table[self.sigma.combo_index(event.mask)]

    def value_mask(self, mask: int) -> Fraction:
        return self.table[self.sigma.combo_index(mask)]

    @cached_property
    def classification(self) -> Classification:
        table = self.table
        k = self.sigma.n_atoms
        n_events = 1 << k
        full = n_events - 1
        normalized = table[full] == 1 and table[0] == 0
        monotone = True
        for f in range(n_events):
            if not monotone:
                break
            vf = table[f]
            e = (f - 1) & f
            while True:
                if table[e] > vf:
                    monotone = False
                    break
                if e == 0:
                    break
                e = (e - 1) & f
        additive = True
        for e in range(n_events):
            for f in range(n_events):
                if e & f == 0 and table[e | f] != table[e] + table[f]:
                    additive = False
                    break
            if not additive:
                break
        convex = True
        for e in range(n_events):
            for f in range(n_events):
                if table[e] + table[f] > table[e & f] + table[e | f]:
                    convex = False
                    break
            if not convex:
                break
        one_intersection = True
        for e in range(n_events):
            if table[e] != 1:
                continue
            for f in range(n_events):
                if table[f] == 1 and table[e & f] != 1:
                    one_intersection = False
                    break
            if not one_intersection:
                break
        return Classification(normalized, monotone, additive, convex, one_intersection)


def classify(setfn: SetFunction) -> Classification:
    return setfn.classification


def set_function_from_atom_weights(
    sigma: SigmaAlgebra, weights: Iterable[Fraction]
) -> SetFunction:
    """The additive set function with the given atom weights (weights sum <= 1
    is not required; the table must still stay inside [0,1])."""
    ws = tuple(as_fraction(w) for w in weights)
    if len(ws) != sigma.n_atoms:
        raise IncompleteCapacity(f"expected {sigma.n_atoms} atom weights, got {len(ws)}")
    table = [ZERO] * (1 << sigma.n_atoms)
    for idx in range(1, 1 << sigma.n_atoms):
        low = idx & -idx
        table[idx] = table[idx ^ low] + ws[low.bit_length() - 1]
    return SetFunction(sigma, tuple(table))


def set_function_from_values(
    sigma: SigmaAlgebra, values: Mapping[Event, Fraction] | Mapping[int, Fraction]
) -> SetFunction:
    """Build a set function from an explicit event -> value map (must be total)."""
    table: list[Fraction | None] = [None] * (1 << sigma.n_atoms)
    for key, v in values.items():
        mask = key.mask if isinstance(key, Event) else key
        table[sigma.combo_index(mask)] = as_fraction(v)
    for idx, entry in enumerate(table):
        if entry is None:
            names = sigma.space.names_of(sigma.event_masks[idx])
            raise IncompleteCapacity(f"missing value for event {names}")
    return SetFunction(sigma, tuple(table))  # type: ignore[arg-type]


def dirac_type(sigma: SigmaAlgebra, state: str) -> SetFunction:
    """The 0/1 set function putting all mass on the atom of ``state``."""
    i = sigma.space.index[state]
    table = tuple(
        ONE if mask >> i & 1 else ZERO for mask in sigma.event_masks
    )
    return SetFunction(sigma, table)


@dataclass(frozen=True)
class TypeMapping:
    """One set function per state: state omega's beliefs t(omega, .)."""

    sigma: SigmaAlgebra
    per_state: tuple[SetFunction, ...]

    def __post_init__(self):
        if len(self.per_state) != len(self.sigma.space):
            raise IncompleteCapacity(
                f"expected one set function per state "
                f"({len(self.sigma.space)}), got {len(self.per_state)}"
            )
        for sf in self.per_state:
            if sf.sigma is not self.sigma and sf.sigma != self.sigma:
                raise AlgebraMismatch("type mapping mixes sigma-algebras")

    def value(self, state: str, event: Event) -> Fraction:
        return self.per_state[self.sigma.space.index[state]].value(event)

    @cached_property
    def order_masks(self) -> tuple[tuple[int, ...], tuple[int, ...], tuple[int, ...]]:
        """(up, down, bracket) masks per state index.

        up[i] holds the states whose type pointwise dominates state i's type,
        down[i] those dominated by it, bracket[i] their intersection (the
        states with identical type).
        """
        n = len(self.per_state)
        tables = [sf.table for sf in self.per_state]
        dominates = [[False] * n for _ in range(n)]
        for i in range(n):
            ti = tables[i]
            for j in range(n):
                tj = tables[j]
                dominates[i][j] = ti is tj or all(a <= b for a, b in zip(ti, tj))
        ups, downs, brackets = [], [], []
        for i in range(n):
            up = 0
            down = 0
            for j in range(n):
                if dominates[i][j]:
                    up |= 1 << j
                if dominates[j][i]:
                    down |= 1 << j
            ups.append(up)
            downs.append(down)
            brackets.append(up & down)
        return tuple(ups), tuple(downs), tuple(brackets)

    @cached_property
    def thresholds(self) -> tuple[Fraction, ...]:
        """{0, 1} plus every value attained by some t(omega, E), ascending."""
        values = {ZERO, ONE}
        for sf in self.per_state:
            values.update(sf.table)
        return tuple(sorted(values))


def type_mapping_constant(sigma: SigmaAlgebra, setfn: SetFunction) -> TypeMapping:
    return TypeMapping(sigma, tuple(setfn for _ in range(len(sigma.space))))


def _order_event(types: TypeMapping, state: str, which: int) -> Event:
    mask = types.order_masks[which][types.sigma.space.index[state]]
    if not types.sigma.is_measurable_mask(mask):
        names = types.sigma.space.names_of(mask)
        kind = ("upper", "lower", "bracket")[which]
        raise NotMeasurable(f"{kind} order set {names} of state {state!r} is not in Sigma")
    return Event(types.sigma, mask)


def up_set(types: TypeMapping, state: str) -> Event:
    """States whose type pointwise dominates t(state, .)."""
    return _order_event(types, state, 0)


def down_set(types: TypeMapping, state: str) -> Event:
    """States whose type is pointwise dominated by t(state, .)."""
    return _order_event(types, state, 1)


def bracket(types: TypeMapping, state: str) -> Event:
    """States with exactly the same type as ``state`` (up intersect down)."""
    return _order_event(types, state, 2)


def type_measurability_check(types: TypeMapping) -> CheckReport:
    """t(., E) must be constant on atoms for every E, and every up/down set
    must itself be an event of the algebra."""
    sigma = types.sigma
    space = sigma.space
    witnesses = []
    passed = True
    for combo, mask in enumerate(sigma.event_masks):
        for atom in sigma.atoms:
            members = space.names_of(atom)
            first = types.per_state[space.index[members[0]]].table[combo]
            for other in members[1:]:
                if types.per_state[space.index[other]].table[combo] != first:
                    passed = False
                    witnesses.append(
                        Witness(
                            state=members[0],
                            other_state=other,
                            event=space.names_of(mask),
                            note="t(., E) not constant on atom",
                        )
                    )
                    break
            if not passed:
                break
        if not passed:
            break
    if passed:
        ups, downs, _ = types.order_masks
        for i, name in enumerate(space.states):
            for kind, mask in (("upper", ups[i]), ("lower", downs[i])):
                if not sigma.is_measurable_mask(mask):
                    passed = False
                    witnesses.append(
                        Witness(
                            state=name,
                            event=space.names_of(mask),
                            note=f"{kind} order set not in Sigma",
                        )
                    )
                    break
            if not passed:
                break
    scope = (
        f"all {1 << sigma.n_atoms} events x {sigma.n_atoms} atoms, "
        f"plus order sets of {len(space)} states"
    )
    return CheckReport("type-measurability", passed, tuple(witnesses), scope)
