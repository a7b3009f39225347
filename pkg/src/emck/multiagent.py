"""Interactive models: several agents sharing one probability space, with
per-agent correspondences and type mappings, plus mutual and common belief
operators and the agreement checker.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from itertools import product

from .axioms import _regular_verdict, is_regular
from .beliefs import ONE, Prior, TypeMapping, as_fraction
from .errors import (
    AlgebraMismatch,
    AssumptionViolated,
    InvariantError,
    RationalOutOfRange,
    ResourceLimit,
)
from .events import Event, SigmaAlgebra
from .operators import EpistemicModel, PossibilityCorrespondence, _b_mask, _k_mask
from .reports import (
    CheckReport,
    HypothesisResult,
    VerificationReport,
    Witness,
    format_rational,
)
from .theorems import _cover_combo


@dataclass(frozen=True)
class InteractiveModel:
    """Shared (space, algebra, prior) with one (P_i, t_i) pair per agent."""

    sigma: SigmaAlgebra
    prior: Prior
    agents: tuple[str, ...]
    posses: tuple[PossibilityCorrespondence, ...]
    types: tuple[TypeMapping, ...]
    # validation mode, not part of the model structure
    allow_null_cells: bool = field(default=False, compare=False)

    def __post_init__(self):
        if len(self.agents) == 0:
            raise InvariantError("an interactive model needs at least one agent")
        if len(set(self.agents)) != len(self.agents):
            raise InvariantError("agent names must be unique")
        if not (len(self.agents) == len(self.posses) == len(self.types)):
            raise InvariantError(
                "agents, correspondences, and type mappings must align"
            )
        self.agent_models  # eager: runs every per-agent validation

    @cached_property
    def agent_models(self) -> tuple[EpistemicModel, ...]:
        return tuple(
            EpistemicModel(
                self.sigma,
                self.prior,
                poss,
                types,
                allow_null_cells=self.allow_null_cells,
            )
            for poss, types in zip(self.posses, self.types)
        )

    def agent_model(self, name: str) -> EpistemicModel:
        if name not in self.agents:
            raise KeyError(f"unknown agent: {name!r}")
        return self.agent_models[self.agents.index(name)]

    @property
    def space(self):
        return self.sigma.space

    @cached_property
    def is_discrete(self) -> bool:
        return self.agent_models[0].is_discrete

    @cached_property
    def reach_masks(self) -> tuple[int, ...]:
        """States reachable in one or more steps of the union relation
        Q(omega) = union over agents of P_i(omega)."""
        n = len(self.space)
        q = [0] * n
        for poss in self.posses:
            for i, cell in enumerate(poss.cells):
                q[i] |= cell
        reach = list(q)
        changed = True
        while changed:
            changed = False
            for i in range(n):
                acc = reach[i]
                rest = acc
                while rest:
                    j = (rest & -rest).bit_length() - 1
                    rest &= rest - 1
                    acc |= reach[j]
                if acc != reach[i]:
                    reach[i] = acc
                    changed = True
        return tuple(reach)

    @cached_property
    def thresholds(self) -> tuple[Fraction, ...]:
        """{0, 1} plus every value attained by any agent's type, ascending."""
        vals: set[Fraction] = set()
        for t in self.types:
            vals.update(t.thresholds)
        return tuple(sorted(vals))

    def event(self, names) -> Event:
        return self.sigma.event(names)


def _check_event(imodel: InteractiveModel, event: Event) -> None:
    if event.sigma is not imodel.sigma and event.sigma != imodel.sigma:
        raise AlgebraMismatch("event belongs to a different algebra")


def _combo_of_imodel(imodel: InteractiveModel):
    if imodel.sigma.is_powerset:
        return lambda mask: mask
    return imodel.sigma.combo_index


def _validated_p(p) -> Fraction:
    p = as_fraction(p)
    if not 0 <= p <= 1:
        raise RationalOutOfRange(f"threshold {p} outside [0, 1]")
    return p


# ---------------------------------------------------------------------------
# mutual and common operators


def _mutual_k(imodel: InteractiveModel, emask: int) -> int:
    m = imodel.space.full_mask
    for poss in imodel.posses:
        m &= _k_mask(poss.cells, emask)
        if not m:
            break
    return m


def _mutual_b(imodel: InteractiveModel, combo: int, p: Fraction) -> int:
    m = imodel.space.full_mask
    for types in imodel.types:
        m &= _b_mask(tuple(sf.table for sf in types.per_state), combo, p)
        if not m:
            break
    return m


def mutual_qualitative(imodel: InteractiveModel, event: Event) -> Event:
    """States where every agent qualitatively believes the event."""
    _check_event(imodel, event)
    return Event(imodel.sigma, _mutual_k(imodel, event.mask))


def mutual_p_belief(imodel: InteractiveModel, p, event: Event) -> Event:
    """States where every agent assigns the event probability at least p."""
    _check_event(imodel, event)
    p = _validated_p(p)
    combo = _combo_of_imodel(imodel)(event.mask)
    return Event(imodel.sigma, _mutual_b(imodel, combo, p))


def _common_k_mask(imodel: InteractiveModel, emask: int) -> int:
    reach = imodel.reach_masks
    out = 0
    bit = 1
    for r in reach:
        if r & ~emask == 0:
            out |= bit
        bit <<= 1
    return out


def _iterative_common_k(imodel: InteractiveModel, emask: int) -> int:
    """Intersection of the first |states| iterates of the mutual operator.

    Walks longer than the state count revisit already-reachable states, so
    truncating the infinite intersection there is exact.
    """
    acc = imodel.space.full_mask
    x = emask
    for _ in range(len(imodel.space)):
        x = _mutual_k(imodel, x)
        acc &= x
    return acc


def common_qualitative(imodel: InteractiveModel, event: Event) -> Event:
    """C(E): states from which every chain of considered-possible states,
    across all agents, stays inside E.

    Computed from the transitive closure of the union relation and
    cross-checked against the iterated mutual operator; a mismatch would be
    an internal defect, not a property of the model.
    """
    _check_event(imodel, event)
    mask = _common_k_mask(imodel, event.mask)
    if mask != _iterative_common_k(imodel, event.mask):
        raise RuntimeError(
            "internal inconsistency: closure and iteration disagree"
        )
    return Event(imodel.sigma, mask)


def _common_b_mask(imodel: InteractiveModel, combo: int, p: Fraction) -> int:
    """Intersection of all iterates X_(n+1) = mutual-B^p(X_n) from the event.

    The iterates live in the finite algebra and the map is deterministic, so
    the sequence is eventually periodic; accumulation stops once an input
    event repeats, at which point every later iterate has been seen.
    """
    combo_of = _combo_of_imodel(imodel)
    acc = imodel.space.full_mask
    cur = combo
    seen: set[int] = set()
    while cur not in seen:
        seen.add(cur)
        m = _mutual_b(imodel, cur, p)
        acc &= m
        cur = combo_of(m)
    return acc


def common_p_belief(imodel: InteractiveModel, p, event: Event) -> Event:
    """C^p(E): the intersection of every finite depth of 'everyone p-believes'."""
    _check_event(imodel, event)
    p = _validated_p(p)
    combo = _combo_of_imodel(imodel)(event.mask)
    return Event(imodel.sigma, _common_b_mask(imodel, combo, p))


# ---------------------------------------------------------------------------
# interactive checks and verifiers


def _regular_imodel(imodel: InteractiveModel) -> bool:
    return all(_regular_verdict(m) for m in imodel.agent_models)


def is_regular_interactive(imodel: InteractiveModel) -> CheckReport:
    """Regularity agent by agent; the model is regular iff every agent is."""
    children = tuple(
        CheckReport(f"regular[{name}]", r.passed, r.witnesses, r.scope, r.children)
        for name, r in (
            (name, is_regular(m))
            for name, m in zip(imodel.agents, imodel.agent_models)
        )
    )
    return CheckReport(
        "regular-interactive",
        all(c.passed for c in children),
        (),
        f"all {len(imodel.agents)} agents",
        children,
    )


def verify_cor_ck(imodel: InteractiveModel) -> VerificationReport:
    """Discrete regular case: common qualitative belief is common knowledge.

    Asserts C(E) = C^1(E) for every event, and Truth Axiom, Positive
    Introspection, and Negative Introspection for C.  On models that are not
    discrete or not regular the checks still run but nothing is asserted.
    """
    discrete = imodel.is_discrete
    regular = _regular_imodel(imodel)
    sigma = imodel.sigma
    space = sigma.space
    combo_of = _combo_of_imodel(imodel)
    full = space.full_mask
    n_events = 1 << sigma.n_atoms
    c_masks = [
        _common_k_mask(imodel, sigma.event_masks[combo]) for combo in range(n_events)
    ]

    def report(name: str, hit, note: str) -> CheckReport:
        witnesses = ()
        if hit is not None:
            combo, i = hit
            witnesses = (
                Witness(
                    state=space.states[i],
                    event=space.names_of(sigma.event_masks[combo]),
                    note=note,
                ),
            )
        return CheckReport(name, hit is None, witnesses, f"all {n_events} events")

    eq_hit = None
    for combo in range(n_events):
        c1 = _common_b_mask(imodel, combo, ONE)
        if c_masks[combo] != c1:
            diff = c_masks[combo] ^ c1
            eq_hit = (combo, (diff & -diff).bit_length() - 1)
            break

    ta_hit = pi_hit = ni_hit = None
    for combo in range(n_events):
        c = c_masks[combo]
        bad = c & ~sigma.event_masks[combo]
        if ta_hit is None and bad:
            ta_hit = (combo, (bad & -bad).bit_length() - 1)
        bad = c & ~c_masks[combo_of(c)]
        if pi_hit is None and bad:
            pi_hit = (combo, (bad & -bad).bit_length() - 1)
        nc = full & ~c
        bad = nc & ~c_masks[combo_of(nc)]
        if ni_hit is None and bad:
            ni_hit = (combo, (bad & -bad).bit_length() - 1)

    checks = (
        report("c-equals-c1", eq_hit, "C(E) and C^1(E) disagree at this state"),
        report("c-truth-axiom", ta_hit, "state in C(E) but not in E"),
        report("c-positive-introspection", pi_hit, "state in C(E) but not in C(C(E))"),
        report(
            "c-negative-introspection", ni_hit, "state outside C(E) but not in C(not C(E))"
        ),
    )
    return VerificationReport(
        claim="cor-ck",
        hypotheses=(
            HypothesisResult("discrete", discrete),
            HypothesisResult("regular", regular),
        ),
        checks=checks,
    )


def verify_agreement(
    imodel: InteractiveModel, p, event: Event, budget: int = 100_000
) -> CheckReport:
    """No agreeing to disagree: for every vector of posterior values the
    agents can jointly hold about the event, common p-belief in that value
    profile bounds the spread of the values by 1 - p, and common qualitative
    belief forces them to be equal.

    Enumerates every attainable value vector exactly; raises ResourceLimit
    rather than sampling if there are more than ``budget`` of them.
    """
    _check_event(imodel, event)
    p = _validated_p(p)
    if not _regular_imodel(imodel):
        raise AssumptionViolated("agreement requires a regular interactive model")
    sigma = imodel.sigma
    space = sigma.space
    combo_of = _combo_of_imodel(imodel)
    combo = combo_of(event.mask)
    full = space.full_mask

    level_masks: list[dict[Fraction, int]] = []
    for types in imodel.types:
        levels: dict[Fraction, int] = {}
        for i, sf in enumerate(types.per_state):
            levels.setdefault(sf.table[combo], 0)
            levels[sf.table[combo]] |= 1 << i
        level_masks.append(levels)
    counts = [len(levels) for levels in level_masks]
    total = 1
    for c in counts:
        total *= c
    if total > budget:
        raise ResourceLimit(
            f"{total} value vectors exceed the budget of {budget}"
        )

    bound = 1 - p
    hit = None
    for vector in product(*(sorted(levels) for levels in level_masks)):
        d = full
        for levels, r in zip(level_masks, vector):
            d &= levels[r]
            if not d:
                break
        spread = max(vector) - min(vector)
        if not spread:
            continue
        if spread > bound and _common_b_mask(imodel, combo_of(d), p):
            hit = (vector, d, "p")
            break
        if _common_k_mask(imodel, d):
            hit = (vector, d, "k")
            break
    witnesses = ()
    if hit is not None:
        vector, d, kind = hit
        values = ", ".join(
            f"{name}={format_rational(r)}" for name, r in zip(imodel.agents, vector)
        )
        if kind == "p":
            note = f"C^p of the value profile ({values}) is nonempty but the spread exceeds 1-p"
        else:
            note = f"C of the value profile ({values}) is nonempty but the values differ"
        witnesses = (Witness(event=space.names_of(d), threshold=p, note=note),)
    return CheckReport(
        "agreement",
        hit is None,
        witnesses,
        f"{total} value vectors for one event",
    )


def verify_cor_ta_common(
    imodel: InteractiveModel, diagnostic: bool = False
) -> CheckReport:
    """Truth Axiom up to measure zero for the common operators: C(E) and
    C^1(E) exceed E only by events that are null under the prior and under
    every agent's type at every state."""
    regular = _regular_imodel(imodel)
    if not regular and not diagnostic:
        raise AssumptionViolated("requires a regular interactive model")
    sigma = imodel.sigma
    space = sigma.space
    prior_table = imodel.prior.combo_table
    n_events = 1 << sigma.n_atoms

    def truth_reports(label: str, mask_of) -> tuple[CheckReport, CheckReport]:
        mu_hit = None
        ty_hit = None
        for combo in range(n_events):
            slack = mask_of(combo) & ~sigma.event_masks[combo]
            if not slack:
                continue
            cover = _cover_combo(sigma, slack)
            if mu_hit is None and prior_table[cover] != 0:
                mu_hit = combo
            if ty_hit is None:
                for a, types in enumerate(imodel.types):
                    for i, sf in enumerate(types.per_state):
                        if sf.table[cover] != 0:
                            ty_hit = (combo, a, i)
                            break
                    if ty_hit is not None:
                        break
            if mu_hit is not None and ty_hit is not None:
                break
        mu_witnesses = ()
        if mu_hit is not None:
            mu_witnesses = (
                Witness(
                    event=space.names_of(sigma.event_masks[mu_hit]),
                    note=f"mu({label}(E) minus E) > 0",
                ),
            )
        ty_witnesses = ()
        if ty_hit is not None:
            combo, a, i = ty_hit
            ty_witnesses = (
                Witness(
                    state=space.states[i],
                    event=space.names_of(sigma.event_masks[combo]),
                    note=f"t_{imodel.agents[a]}(omega, {label}(E) minus E) > 0",
                ),
            )
        scope = f"all {n_events} events"
        return (
            CheckReport(f"{label}-truth-mu", mu_hit is None, mu_witnesses, scope),
            CheckReport(
                f"{label}-truth-types",
                ty_hit is None,
                ty_witnesses,
                scope + f" x {len(imodel.agents)} agents x {len(space)} states",
            ),
        )

    children = list(
        truth_reports("c", lambda combo: _common_k_mask(imodel, sigma.event_masks[combo]))
    )
    children.extend(
        truth_reports("c1", lambda combo: _common_b_mask(imodel, combo, ONE))
    )
    scope = "common operators"
    if not regular:
        scope += " (diagnostic: preconditions not met)"
    return CheckReport(
        "almost-sure-truth-axiom-common",
        all(c.passed for c in children),
        (),
        scope,
        tuple(children),
    )
