"""Possibility correspondences, epistemic models, and belief operators.

A model is the tuple (space, algebra, prior, possibility correspondence,
type mapping).  The knowledge operator K and the p-belief operators B^p are
computed from it pointwise; both return events of the same algebra.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from typing import Callable, Iterable, Mapping

from .beliefs import ONE, ZERO, Prior, TypeMapping, as_fraction, type_measurability_check
from .errors import (
    AlgebraMismatch,
    AssumptionViolated,
    InvalidAtoms,
    NotInducible,
    NotMeasurable,
    RationalOutOfRange,
)
from .events import Event, SigmaAlgebra
from .reports import CheckReport, Witness


@dataclass(frozen=True)
class PossibilityCorrespondence:
    """P: state -> event; cells[i] is the mask of P at state index i."""

    sigma: SigmaAlgebra
    cells: tuple[int, ...]

    def __post_init__(self):
        if len(self.cells) != len(self.sigma.space):
            raise InvalidAtoms(
                f"expected one cell per state ({len(self.sigma.space)}), "
                f"got {len(self.cells)}"
            )
        for i, mask in enumerate(self.cells):
            if not self.sigma.is_measurable_mask(mask):
                name = self.sigma.space.states[i]
                raise NotMeasurable(
                    f"P({name}) = {self.sigma.space.names_of(mask)} is not in Sigma"
                )

    @cached_property
    def cell_combos(self) -> tuple[int, ...]:
        """Canonical event index of each cell (hot-loop companion of cells)."""
        return tuple(self.sigma.combo_index(mask) for mask in self.cells)

    def cell(self, state: str) -> Event:
        return Event(self.sigma, self.cells[self.sigma.space.index[state]])

    @cached_property
    def is_partition(self) -> bool:
        """True when P is induced by an equivalence relation: every state lies
        in its own cell and any two cells are equal or disjoint with membership
        respected (omega' in P(omega) implies P(omega') = P(omega))."""
        for i, mask in enumerate(self.cells):
            if not (mask >> i & 1):
                return False
            for j in range(len(self.cells)):
                if mask >> j & 1 and self.cells[j] != mask:
                    return False
        return True


def poss_from_partition(
    sigma: SigmaAlgebra, blocks: Iterable[Iterable[str]]
) -> PossibilityCorrespondence:
    """Build the correspondence sending each state to its block."""
    space = sigma.space
    cells = [0] * len(space)
    seen = 0
    for block in blocks:
        mask = space.mask_of(block)
        if mask & seen:
            raise InvalidAtoms("partition blocks overlap")
        seen |= mask
        for i in range(len(space)):
            if mask >> i & 1:
                cells[i] = mask
    if seen != space.full_mask:
        raise InvalidAtoms(
            f"partition misses states {space.names_of(space.full_mask & ~seen)}"
        )
    return PossibilityCorrespondence(sigma, tuple(cells))


def poss_from_cells(
    sigma: SigmaAlgebra, cells: Mapping[str, Iterable[str]]
) -> PossibilityCorrespondence:
    space = sigma.space
    masks = [None] * len(space)
    for name, members in cells.items():
        masks[space.index[name]] = space.mask_of(members)
    for i, mask in enumerate(masks):
        if mask is None:
            raise InvalidAtoms(f"no cell given for state {space.states[i]!r}")
    return PossibilityCorrespondence(sigma, tuple(masks))  # type: ignore[arg-type]


@dataclass(frozen=True)
class EpistemicModel:
    """A single-agent model (space, algebra, prior, P, t).

    By default each cell must have positive prior measure, matching the
    standing assumption mu(P(.)) > 0; set ``allow_null_cells`` to represent
    models outside that assumption (verifiers then report which statements
    still apply).
    """

    sigma: SigmaAlgebra
    prior: Prior
    poss: PossibilityCorrespondence
    types: TypeMapping
    # validation mode, not part of the model structure ((space, algebra,
    # prior, P, t) determines equality)
    allow_null_cells: bool = field(default=False, compare=False)

    def __post_init__(self):
        for part, label in (
            (self.prior.sigma, "prior"),
            (self.poss.sigma, "possibility correspondence"),
            (self.types.sigma, "type mapping"),
        ):
            if part is not self.sigma and part != self.sigma:
                raise AlgebraMismatch(f"{label} uses a different sigma-algebra")
        if not self.sigma.is_powerset:
            report = type_measurability_check(self.types)
            if not report.passed:
                w = report.witnesses[0]
                raise NotMeasurable(f"type mapping not measurable: {w.note} at {w.state}")
            report = poss_measurability_check_poss(self.poss)
            if not report.passed:
                w = report.witnesses[0]
                raise NotMeasurable(
                    f"possibility correspondence not measurable at event {w.event}"
                )
        if not self.allow_null_cells and self.has_null_cells:
            i = self._first_null_cell
            name = self.sigma.space.states[i]
            raise AssumptionViolated(
                f"mu(P({name})) = 0; pass allow_null_cells=True to represent "
                f"models outside the positive-cell assumption"
            )

    @cached_property
    def _first_null_cell(self) -> int | None:
        table = self.prior.combo_table
        for i, combo in enumerate(self.poss.cell_combos):
            if table[combo] == 0:
                return i
        return None

    @property
    def has_null_cells(self) -> bool:
        return self._first_null_cell is not None

    @cached_property
    def is_discrete(self) -> bool:
        """Powerset algebra with strictly positive weight on every state."""
        return self.sigma.is_powerset and all(w > 0 for w in self.prior.weights)

    @property
    def space(self):
        return self.sigma.space

    def t(self, state: str, event: Event) -> Fraction:
        return self.types.value(state, event)

    def event(self, names: Iterable[str]) -> Event:
        return self.sigma.event(names)


def _k_mask(cells: tuple[int, ...], emask: int) -> int:
    out = 0
    bit = 1
    for cell in cells:
        if not cell & ~emask:
            out |= bit
        bit <<= 1
    return out


def _b_mask(tables, combo: int, p: Fraction) -> int:
    out = 0
    bit = 1
    for table in tables:
        if table[combo] >= p:
            out |= bit
        bit <<= 1
    return out


def qualitative_belief(model: EpistemicModel, event: Event) -> Event:
    """K(E) = the states whose whole cell lies inside E."""
    if event.sigma is not model.sigma and event.sigma != model.sigma:
        raise AlgebraMismatch("event belongs to a different sigma-algebra")
    mask = _k_mask(model.poss.cells, event.mask)
    if not model.sigma.is_measurable_mask(mask):
        raise NotMeasurable(
            f"K({event!r}) = {model.sigma.space.names_of(mask)} is not in Sigma"
        )
    return Event(model.sigma, mask)


def p_belief(model: EpistemicModel, p: Fraction, event: Event) -> Event:
    """B^p(E) = the states that assign E probability at least p."""
    p = as_fraction(p)
    if p < 0 or p > 1:
        raise RationalOutOfRange(f"belief threshold {p} outside [0, 1]")
    if event.sigma is not model.sigma and event.sigma != model.sigma:
        raise AlgebraMismatch("event belongs to a different sigma-algebra")
    combo = model.sigma.combo_index(event.mask)
    tables = tuple(sf.table for sf in model.types.per_state)
    mask = _b_mask(tables, combo, p)
    if not model.sigma.is_measurable_mask(mask):
        raise NotMeasurable(
            f"B^{p}({event!r}) = {model.sigma.space.names_of(mask)} is not in Sigma"
        )
    return Event(model.sigma, mask)


def critical_thresholds(model: EpistemicModel) -> tuple[Fraction, ...]:
    """{0, 1} plus every attained type value, ascending.

    For any p in [0, 1], B^p(E) equals B^v(E) where v is the smallest
    threshold >= p (1 is always present), so a universally quantified
    statement over p in [0, 1] holds iff it holds at these finitely many
    values; see the step-function note in the README.
    """
    return model.types.thresholds


def poss_measurability_check_poss(poss: PossibilityCorrespondence) -> CheckReport:
    sigma = poss.sigma
    witnesses = []
    passed = True
    for mask in sigma.event_masks:
        kmask = _k_mask(poss.cells, mask)
        if not sigma.is_measurable_mask(kmask):
            passed = False
            witnesses.append(
                Witness(
                    event=sigma.space.names_of(mask),
                    note=f"K(E) = {sigma.space.names_of(kmask)} is not in Sigma",
                )
            )
            break
    scope = f"all {1 << sigma.n_atoms} events"
    return CheckReport("poss-measurability", passed, tuple(witnesses), scope)


def poss_measurability_check(model: EpistemicModel) -> CheckReport:
    """{omega : P(omega) subset of E} must be an event, for every event E."""
    return poss_measurability_check_poss(model.poss)


def poss_from_operator(
    sigma: SigmaAlgebra,
    operator: Mapping[Event, Event] | Callable[[Event], Event],
) -> PossibilityCorrespondence:
    """Recover the unique P inducing a knowledge operator.

    The operator must satisfy monotonicity, (finite) conjunction, and
    necessitation; those three are exactly what make K(E) = {omega : P(omega)
    subset of E} solvable, with P(omega) the intersection of all events known
    at omega.
    """
    events = sigma.events()
    get = operator.__getitem__ if isinstance(operator, Mapping) else operator
    k_masks = []
    for ev in events:
        image = get(ev)
        if image.sigma is not sigma and image.sigma != sigma:
            raise AlgebraMismatch("operator image uses a different sigma-algebra")
        k_masks.append(image.mask)

    full = sigma.space.full_mask
    if k_masks[len(events) - 1] != full:
        raise NotInducible(
            "necessitation fails: K(Omega) != Omega",
            witness=("necessitation", events[-1].members),
        )
    n_events = len(events)
    for f in range(n_events):
        e = (f - 1) & f
        while True:
            if k_masks[e] & ~k_masks[f]:
                raise NotInducible(
                    f"monotonicity fails: K({events[e]!r}) not inside K({events[f]!r})",
                    witness=("monotonicity", events[e].members, events[f].members),
                )
            if e == 0:
                break
            e = (e - 1) & f
    for e in range(n_events):
        for f in range(n_events):
            joint = k_masks[e] & k_masks[f]
            if joint & ~k_masks[e & f]:
                raise NotInducible(
                    f"conjunction fails at K({events[e]!r}) and K({events[f]!r})",
                    witness=("conjunction", events[e].members, events[f].members),
                )

    cells = []
    for i in range(len(sigma.space)):
        cell = full
        for idx in range(n_events):
            if k_masks[idx] >> i & 1:
                cell &= events[idx].mask
        cells.append(cell)
    poss = PossibilityCorrespondence(sigma, tuple(cells))
    for idx in range(n_events):
        if _k_mask(poss.cells, events[idx].mask) != k_masks[idx]:
            raise NotInducible(
                f"operator is not induced by any correspondence at {events[idx]!r}",
                witness=("round-trip", events[idx].members),
            )
    return poss
