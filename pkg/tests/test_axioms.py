"""Consistency-axiom checkers and the regularity predicate."""

from fractions import Fraction as F

import pytest

from emck import (
    EpistemicModel,
    PossibilityCorrespondence,
    Prior,
    SetFunction,
    TypeMapping,
    check_certainty,
    check_down_certainty,
    check_down_containment,
    check_entailment,
    check_invariance,
    check_p_introspection,
    check_positive_certainty,
    check_self_evidence,
    check_types_are_measures,
    dirac_type,
    is_regular,
    kripke_properties,
    make_space,
    measure_of,
    poss_from_partition,
    sigma_powerset,
    type_mapping_constant,
    uniform_prior,
)
from emck.fixtures import (
    null_state_slack,
    three_state_partition,
    two_state_capacity,
)

from helpers import w4_partition_poss


def perturbed_w1() -> EpistemicModel:
    """The partition fixture with the type at state 1 replaced by a point
    mass at state 2 (breaks Invariance but keeps measurability)."""
    base = three_state_partition()
    types = TypeMapping(
        base.sigma,
        (dirac_type(base.sigma, "2"), base.types.per_state[1], base.types.per_state[2]),
    )
    return EpistemicModel(base.sigma, base.prior, base.poss, types)


def w2_with_tight_cell() -> EpistemicModel:
    """The null-state fixture with P(b) shrunk to {b}; entailment then fails
    at b because the type at b is the point mass at a."""
    base = null_state_slack()
    poss = PossibilityCorrespondence(base.sigma, (0b01, 0b10))
    return EpistemicModel(
        base.sigma, base.prior, poss, base.types, allow_null_cells=True
    )


class TestInvariance:
    def test_partition_model_satisfies_total_probability(self):
        assert check_invariance(three_state_partition()).passed

    def test_null_state_model_passes(self):
        assert check_invariance(null_state_slack()).passed

    def test_perturbed_type_fails_with_first_witness(self):
        report = check_invariance(perturbed_w1())
        assert not report.passed
        assert report.witnesses[0].event == ("1",)


class TestEntailment:
    def test_fixture_models_pass(self):
        assert check_entailment(three_state_partition()).passed
        assert check_entailment(null_state_slack()).passed

    def test_point_mass_outside_cell_fails_at_that_state(self):
        report = check_entailment(w2_with_tight_cell())
        assert not report.passed
        assert report.witnesses[0].state == "b"


class TestSelfEvidence:
    def test_identical_types_pass_both_directions(self):
        sigma = sigma_powerset(make_space(["1", "2"]))
        prior = uniform_prior(sigma)
        poss = PossibilityCorrespondence(sigma, (0b11, 0b11))
        types = type_mapping_constant(sigma, prior.to_set_function())
        model = EpistemicModel(sigma, prior, poss, types)
        assert check_self_evidence(model).passed
        assert check_down_containment(model).passed

    def test_null_state_model_passes(self):
        model = null_state_slack()
        assert check_self_evidence(model).passed
        assert check_down_containment(model).passed

    def test_capacity_model_with_total_poss_fails_at_pair(self):
        report = check_self_evidence(two_state_capacity())
        assert not report.passed
        hit = report.witnesses[0]
        assert (hit.state, hit.other_state) == ("b", "a")


class TestCertaintyFamily:
    def test_capacity_model_verdicts(self):
        model = two_state_capacity()
        assert check_positive_certainty(model).passed
        certainty = check_certainty(model)
        assert not certainty.passed
        assert certainty.witnesses[0].state == "a"
        down = check_down_certainty(model)
        assert not down.passed
        assert down.witnesses[0].state == "a"

    def test_partition_model_passes_all_three(self):
        model = three_state_partition()
        assert check_certainty(model).passed
        assert check_positive_certainty(model).passed
        assert check_down_certainty(model).passed

    def test_state_independent_type_passes_all_three(self):
        sigma = sigma_powerset(make_space(["1", "2"]))
        prior = uniform_prior(sigma)
        poss = PossibilityCorrespondence(sigma, (0b11, 0b11))
        types = type_mapping_constant(sigma, prior.to_set_function())
        model = EpistemicModel(sigma, prior, poss, types)
        assert check_certainty(model).passed
        assert check_positive_certainty(model).passed
        assert check_down_certainty(model).passed

    def test_additive_types_give_identical_verdicts(self):
        for model in (three_state_partition(), null_state_slack(), perturbed_w1()):
            a = check_certainty(model).passed
            b = check_positive_certainty(model).passed
            c = check_down_certainty(model).passed
            assert a == b == c

    def test_almost_sure_mode_is_weaker(self):
        # strict certainty fails at the capacity state, and the state has
        # positive prior mass, so the almost-sure reading fails too
        model = two_state_capacity()
        assert not check_certainty(model, almost_surely=True).passed
        # put all prior mass on b instead: the only violating state is null
        prior = Prior(model.sigma, (F(0), F(1)))
        shifted = EpistemicModel(model.sigma, prior, model.poss, model.types)
        assert not check_certainty(shifted).passed
        assert check_certainty(shifted, almost_surely=True).passed


class TestPIntrospection:
    def test_partition_model_passes_all_four(self):
        report = check_p_introspection(three_state_partition())
        assert report.passed
        assert [c.name for c in report.children] == [
            "b1-positive-introspection",
            "b1-negative-introspection",
            "k-positive-introspection",
            "k-negative-introspection",
        ]

    def test_capacity_model_negative_side_fails(self):
        report = check_p_introspection(w4_partition_poss())
        verdicts = {c.name: c for c in report.children}
        assert verdicts["b1-positive-introspection"].passed
        neg = verdicts["b1-negative-introspection"]
        assert not neg.passed
        hit = neg.witnesses[0]
        assert (hit.threshold, hit.event, hit.state) == (F(1), ("b",), "a")

    def test_constant_types_pass(self):
        sigma = sigma_powerset(make_space(["1", "2"]))
        prior = uniform_prior(sigma)
        poss = PossibilityCorrespondence(sigma, (0b11, 0b11))
        types = type_mapping_constant(sigma, prior.to_set_function())
        assert check_p_introspection(EpistemicModel(sigma, prior, poss, types)).passed


class TestRegularity:
    def test_partition_model_is_regular(self):
        report = is_regular(three_state_partition())
        assert report.passed
        assert [c.name for c in report.children] == [
            "probability-types",
            "invariance",
            "entailment",
            "self-evidence",
        ]

    def test_null_state_model_is_regular_without_being_partitional(self):
        model = null_state_slack()
        assert is_regular(model).passed
        assert not model.poss.is_partition

    def test_capacity_model_is_not_regular(self):
        report = is_regular(two_state_capacity())
        assert not report.passed
        verdicts = {c.name: c.passed for c in report.children}
        assert not verdicts["probability-types"]

    def test_types_are_measures_check(self):
        assert check_types_are_measures(three_state_partition()).passed
        assert not check_types_are_measures(two_state_capacity()).passed


class TestKripke:
    def test_partition_model(self):
        report = kripke_properties(three_state_partition())
        assert report.passed  # top level records "P induces a partition"
        assert all(c.passed for c in report.children)

    def test_nested_cells_fail_euclidean_and_negative_introspection(self):
        report = kripke_properties(null_state_slack())
        assert not report.passed
        verdicts = {c.name: c for c in report.children}
        assert verdicts["reflexive"].passed
        assert verdicts["transitive"].passed
        assert not verdicts["euclidean"].passed
        hit = verdicts["euclidean"].witnesses[0]
        assert (hit.state, hit.other_state) == ("b", "a")
        assert not verdicts["negative-introspection"].passed
        assert verdicts["truth-axiom"].passed
        assert verdicts["positive-introspection"].passed

    def test_total_correspondence_is_a_single_cell_partition(self):
        sigma = sigma_powerset(make_space(["1", "2"]))
        prior = uniform_prior(sigma)
        poss = PossibilityCorrespondence(sigma, (0b11, 0b11))
        types = type_mapping_constant(sigma, prior.to_set_function())
        assert kripke_properties(EpistemicModel(sigma, prior, poss, types)).passed

    def test_relational_and_operator_verdicts_agree(self):
        for model in (
            three_state_partition(),
            null_state_slack(),
            two_state_capacity(),
            w2_with_tight_cell(),
        ):
            verdicts = {c.name: c.passed for c in kripke_properties(model).children}
            assert verdicts["reflexive"] == verdicts["truth-axiom"]
            assert verdicts["transitive"] == verdicts["positive-introspection"]
            assert verdicts["euclidean"] == verdicts["negative-introspection"]


class TestRegularConsequences:
    def test_entailment_self_evidence_monotone_imply_positive_certainty(self):
        for model in (three_state_partition(), null_state_slack()):
            assert check_entailment(model).passed
            assert check_self_evidence(model).passed
            assert check_positive_certainty(model).passed

    def test_null_events_agree_between_prior_and_types_when_regular(self):
        for model in (three_state_partition(), null_state_slack()):
            assert is_regular(model).passed
            for e in model.sigma.events():
                prior_null = measure_of(model.prior, e) == 0
                types_null = all(model.t(s, e) == 0 for s in model.space.states)
                assert prior_null == types_null
