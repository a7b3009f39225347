"""Interactive models, common-belief fixpoints, and the agreement bound."""

from fractions import Fraction as F

import pytest

from emck import (
    AssumptionViolated,
    InteractiveModel,
    InvariantError,
    ResourceLimit,
    SetFunction,
    TypeMapping,
    agreement_sweep,
    common_p_belief,
    common_qualitative,
    is_regular_interactive,
    make_space,
    mutual_p_belief,
    mutual_qualitative,
    p_belief,
    qualitative_belief,
    sigma_powerset,
    type_mapping_constant,
    uniform_prior,
    verify_agreement,
    verify_cor_ck,
    verify_cor_ta_common,
)
from emck.fixtures import (
    as_interactive,
    null_state_slack,
    three_state_partition,
    two_agent_partitions,
)

from helpers import (
    members,
    naive_common_b,
    naive_common_k,
    naive_mutual_k,
)


@pytest.fixture
def iw1():
    return two_agent_partitions()


def doubled(model) -> InteractiveModel:
    return InteractiveModel(
        model.sigma,
        model.prior,
        ("alice", "bob"),
        (model.poss, model.poss),
        (model.types, model.types),
        allow_null_cells=model.allow_null_cells,
    )


class TestConstruction:
    def test_at_least_one_agent(self):
        model = three_state_partition()
        with pytest.raises(InvariantError):
            InteractiveModel(model.sigma, model.prior, (), (), ())

    def test_duplicate_agent_names_rejected(self):
        model = three_state_partition()
        with pytest.raises(InvariantError):
            InteractiveModel(
                model.sigma,
                model.prior,
                ("alice", "alice"),
                (model.poss, model.poss),
                (model.types, model.types),
            )

    def test_regular_flag_requires_every_agent(self, iw1):
        report = is_regular_interactive(iw1)
        assert report.passed
        assert [c.name for c in report.children] == ["regular[alice]", "regular[bob]"]
        # break bob: constant point-mass type not matching his partition
        from emck import dirac_type

        bad_types = type_mapping_constant(iw1.sigma, dirac_type(iw1.sigma, "1"))
        bad = InteractiveModel(
            iw1.sigma,
            iw1.prior,
            iw1.agents,
            iw1.posses,
            (iw1.types[0], bad_types),
        )
        report = is_regular_interactive(bad)
        assert not report.passed
        verdicts = {c.name: c.passed for c in report.children}
        assert verdicts["regular[alice]"] and not verdicts["regular[bob]"]


class TestMutualOperators:
    def test_one_agent_reduces_to_k_and_b(self):
        model = three_state_partition()
        imodel = as_interactive(model)
        for e in model.sigma.events():
            assert mutual_qualitative(imodel, e) == qualitative_belief(model, e)
            for p in (F(0), F(1, 2), F(1)):
                assert mutual_p_belief(imodel, p, e) == p_belief(model, p, e)

    def test_identical_agents_change_nothing(self):
        model = three_state_partition()
        imodel = doubled(model)
        for e in model.sigma.events():
            assert mutual_qualitative(imodel, e) == qualitative_belief(model, e)

    def test_two_partitions_intersect(self, iw1):
        e = iw1.event(["2", "3"])
        assert members(mutual_qualitative(iw1, e)) == {"3"}
        assert members(mutual_qualitative(iw1, e)) == naive_mutual_k(iw1, {"2", "3"})


class TestCommonQualitative:
    def test_single_partitional_agent_collapses_to_k(self):
        model = three_state_partition()
        imodel = as_interactive(model)
        for e in model.sigma.events():
            assert common_qualitative(imodel, e) == qualitative_belief(model, e)

    def test_chained_cells_reach_everything(self, iw1):
        assert common_qualitative(iw1, iw1.event(["2", "3"])).is_empty()
        full = iw1.sigma.full_event
        assert common_qualitative(iw1, full) == full

    def test_matches_iterative_oracle(self, iw1):
        single = as_interactive(null_state_slack())
        for imodel in (iw1, single, doubled(three_state_partition())):
            for e in imodel.sigma.events():
                assert members(common_qualitative(imodel, e)) == naive_common_k(
                    imodel, members(e)
                )


class TestCommonPBelief:
    def test_equals_common_qualitative_at_one_in_discrete_regular(self, iw1):
        for e in iw1.sigma.events():
            assert common_p_belief(iw1, F(1), e) == common_qualitative(iw1, e)

    def test_single_agent_constant_type_thresholds_on_the_prior(self):
        sigma = sigma_powerset(make_space(["1", "2", "3"]))
        from emck import Prior, PossibilityCorrespondence

        prior = Prior(sigma, (F(1, 2), F(1, 4), F(1, 4)))
        poss = PossibilityCorrespondence(sigma, (0b111,) * 3)
        types = type_mapping_constant(sigma, prior.to_set_function())
        from emck import EpistemicModel

        imodel = as_interactive(EpistemicModel(sigma, prior, poss, types))
        for e in sigma.events():
            for p in (F(1, 4), F(1, 2), F(3, 4), F(1)):
                expected = (
                    sigma.full_event
                    if prior.measure_of(e) >= p
                    else sigma.empty_event
                )
                assert common_p_belief(imodel, p, e) == expected

    def test_full_event_is_a_fixed_point(self, iw1):
        full = iw1.sigma.full_event
        assert common_p_belief(iw1, F(1), full) == full

    def test_matches_iterative_oracle(self, iw1):
        for p in iw1.thresholds:
            for e in iw1.sigma.events():
                assert members(common_p_belief(iw1, p, e)) == naive_common_b(
                    iw1, p, members(e)
                )

    def test_common_qualitative_implies_common_p_belief(self, iw1):
        for p in iw1.thresholds:
            for e in iw1.sigma.events():
                assert common_qualitative(iw1, e).is_subset(common_p_belief(iw1, p, e))

    def test_monotone_in_event_antitone_in_p(self, iw1):
        events = iw1.sigma.events()
        ps = iw1.thresholds
        for e in events:
            for f in events:
                if e.is_subset(f):
                    assert common_qualitative(iw1, e).is_subset(
                        common_qualitative(iw1, f)
                    )
                    assert common_p_belief(iw1, F(1, 2), e).is_subset(
                        common_p_belief(iw1, F(1, 2), f)
                    )
            for lo, hi in zip(ps, ps[1:]):
                assert common_p_belief(iw1, hi, e).is_subset(
                    common_p_belief(iw1, lo, e)
                )


class TestCorCk:
    def test_two_partition_agents_pass(self, iw1):
        report = verify_cor_ck(iw1)
        assert report.status == "verified"
        assert {c.name: c.passed for c in report.checks} == {
            "c-equals-c1": True,
            "c-truth-axiom": True,
            "c-positive-introspection": True,
            "c-negative-introspection": True,
        }

    def test_single_agent_reduces_to_k_properties(self):
        report = verify_cor_ck(as_interactive(three_state_partition()))
        assert report.status == "verified"

    def test_non_regular_agent_reported_as_unmet_hypothesis(self, iw1):
        from emck import dirac_type

        bad_types = type_mapping_constant(iw1.sigma, dirac_type(iw1.sigma, "1"))
        bad = InteractiveModel(
            iw1.sigma, iw1.prior, iw1.agents, iw1.posses, (iw1.types[0], bad_types)
        )
        report = verify_cor_ck(bad)
        assert report.status == "hypothesis-not-met"
        assert {h.name: h.holds for h in report.hypotheses} == {
            "discrete": True,
            "regular": False,
        }


class TestAgreement:
    def test_two_partition_agents_certainty_bound(self, iw1):
        report = verify_agreement(iw1, F(1), iw1.event(["1"]))
        assert report.passed
        # the bound holds only trivially here: no value profile about {1} is
        # common 1-belief anywhere
        t_a = {s: iw1.types[0].value(s, iw1.event(["1"])) for s in iw1.space.states}
        t_b = {s: iw1.types[1].value(s, iw1.event(["1"])) for s in iw1.space.states}
        assert set(t_a.values()) == {F(1), F(0)}
        assert set(t_b.values()) == {F(2, 3), F(0)}
        for ra in set(t_a.values()):
            for rb in set(t_b.values()):
                d = frozenset(
                    s
                    for s in iw1.space.states
                    if t_a[s] == ra and t_b[s] == rb
                )
                assert naive_common_b(iw1, F(1), d) == frozenset()

    def test_zero_threshold_bound_is_vacuous(self, iw1):
        for e in iw1.sigma.events():
            assert verify_agreement(iw1, F(0), e).passed

    def test_single_agent_is_vacuous(self):
        imodel = as_interactive(three_state_partition())
        for e in imodel.sigma.events():
            assert verify_agreement(imodel, F(1, 2), e).passed

    def test_non_regular_model_rejected(self, iw1):
        from emck import dirac_type

        bad_types = type_mapping_constant(iw1.sigma, dirac_type(iw1.sigma, "1"))
        bad = InteractiveModel(
            iw1.sigma, iw1.prior, iw1.agents, iw1.posses, (iw1.types[0], bad_types)
        )
        with pytest.raises(AssumptionViolated):
            verify_agreement(bad, F(1), iw1.event(["1"]))

    def test_vector_budget_is_enforced(self, iw1):
        with pytest.raises(ResourceLimit):
            verify_agreement(iw1, F(1), iw1.event(["1"]), budget=1)

    def test_sweep_covers_all_thresholds_and_events(self, iw1):
        report = agreement_sweep(iw1)
        assert report.passed
        # thresholds of IW1: {0, 1/3, 1/2, 2/3, 1} (alice: 0,1/2,1; bob: 0,1/3,2/3,1)
        assert iw1.thresholds == (F(0), F(1, 3), F(1, 2), F(2, 3), F(1))
        assert report.scope == "40 (threshold, event) pairs"


class TestCorTaCommon:
    def test_two_partition_agents_pass(self, iw1):
        assert verify_cor_ta_common(iw1).passed

    def test_two_null_state_agents_pass_with_slack(self):
        imodel = doubled(null_state_slack())
        report = verify_cor_ta_common(imodel)
        assert report.passed
        # the slack is genuine: C^1({a}) = Omega strictly exceeds {a}
        c1 = common_p_belief(imodel, F(1), imodel.event(["a"]))
        assert members(c1) == {"a", "b"}

    def test_non_regular_needs_diagnostic_mode(self):
        model = three_state_partition()
        from emck import dirac_type

        bad_types = type_mapping_constant(model.sigma, dirac_type(model.sigma, "1"))
        bad = InteractiveModel(
            model.sigma, model.prior, ("a1",), (model.poss,), (bad_types,)
        )
        with pytest.raises(AssumptionViolated):
            verify_cor_ta_common(bad)
        report = verify_cor_ta_common(bad, diagnostic=True)
        assert not report.passed
