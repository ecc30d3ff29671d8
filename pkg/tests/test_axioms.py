from fractions import Fraction as F
from itertools import product

import pytest

from budgetagg.axioms import (
    check_anonymous,
    check_ejr_plus,
    check_jr,
    check_onto,
    check_range_respect,
    check_sm_quota_prop,
    find_dictator,
    find_manipulation,
    jr_outcomes,
    linked_order,
    snap_to_integral,
)
from budgetagg.core import (
    FractionalAllocation,
    IntegralAllocation,
    amount_vectors,
    integral_allocations,
    integral_profile,
    integral_profiles,
    l1_disutility,
)
from budgetagg.errors import BudgetExceededError, InvalidInputError
from budgetagg.satgen import enumerate_canonical_profiles
from budgetagg.schedules import floor_im
from oracles import ejr_plus_violation_bruteforce, jr_violation_bruteforce


def alloc(*xs):
    return IntegralAllocation(tuple(xs))


def s032_profile():
    return integral_profile(3, 4, 3, [[0, 0, 0, 3], [0, 0, 3, 0], [2, 0, 1, 0]])


class TestJr:
    def test_s032_ok(self):
        assert check_jr(s032_profile(), alloc(1, 0, 1, 1)) is None

    def test_s032_violation(self):
        profile = s032_profile()
        violation = check_jr(profile, alloc(3, 0, 0, 0))
        assert violation is not None
        # every member supports the named alternative and shares nothing
        # with the allocation; voter 1 (alternative 4 only) is also wronged
        assert len(violation.voters) * 3 >= 3
        for i in violation.voters:
            assert profile.votes[i].amounts[violation.alternative] > 0
        assert check_jr(profile, alloc(0, 3, 0, 0)) is not None

    def test_outcome_set(self):
        outs = {a.amounts for a in jr_outcomes(s032_profile())}
        assert outs == {(0, 0, 1, 2), (0, 0, 2, 1), (0, 1, 1, 1), (1, 0, 1, 1)}

    def test_unanimous_single_minded(self):
        profile = integral_profile(2, 3, 2, [[2, 0, 0], [2, 0, 0]])
        outs = {a.amounts for a in jr_outcomes(profile)}
        assert outs == {a for a in {x.amounts for x in integral_allocations(3, 2)}
                        if a[0] >= 1}

    def test_gamma_size_golden_343(self):
        total = sum(
            len(jr_outcomes(p)) for p in enumerate_canonical_profiles(3, 4, 3)
        )
        assert total == 15992  # pinned at first run

    def test_matches_bruteforce(self):
        for n, m, b in product((1, 2, 3), (2, 3), (1, 2)):
            for profile in integral_profiles(n, m, b):
                for a in integral_allocations(m, b):
                    fast = check_jr(profile, a)
                    slow = jr_violation_bruteforce(profile, a)
                    assert (fast is None) == (slow is None)


class TestEjrPlus:
    def test_skipped_alternative(self):
        profile = integral_profile(3, 4, 3, [[0, 3, 0, 0], [1, 0, 2, 0], [1, 0, 0, 2]])
        violation = check_ejr_plus(profile, alloc(1, 0, 1, 1))
        assert violation is not None
        assert (violation.alternative, violation.level, violation.voters) == (
            1, 1, frozenset({0})
        )

    def test_group_violation(self):
        profile = integral_profile(3, 4, 3, [[0, 3, 0, 0], [1, 0, 2, 0], [1, 0, 0, 2]])
        violation = check_ejr_plus(profile, alloc(0, 1, 1, 1))
        assert violation is not None
        assert violation.alternative == 0
        assert violation.voters == frozenset({1, 2})

    def test_single_voter_own_vote(self):
        profile = integral_profile(1, 3, 2, [[1, 1, 0]])
        assert check_ejr_plus(profile, alloc(1, 1, 0)) is None

    def test_matches_bruteforce(self):
        for n, m, b in product((1, 2, 3), (2, 3), (1, 2)):
            for profile in integral_profiles(n, m, b):
                for a in integral_allocations(m, b):
                    fast = check_ejr_plus(profile, a)
                    slow = ejr_plus_violation_bruteforce(profile, a)
                    assert (fast is None) == (slow is None)


class TestRangeRespect:
    def test_pinned_first_alternative(self):
        profile = integral_profile(3, 4, 3, [[1, 2, 0, 0], [1, 0, 2, 0], [1, 0, 0, 2]])
        assert check_range_respect(profile, alloc(1, 1, 1, 0)) is None
        assert check_range_respect(profile, alloc(0, 1, 1, 1)) == 0
        assert check_range_respect(profile, alloc(2, 1, 0, 0)) == 0

    def test_unanimous(self):
        profile = integral_profile(2, 2, 2, [[1, 1], [1, 1]])
        assert check_range_respect(profile, alloc(1, 1)) is None
        assert check_range_respect(profile, alloc(2, 0)) == 0

    def test_own_vote_passes(self):
        profile = integral_profile(2, 3, 3, [[3, 0, 0], [0, 1, 2]])
        assert check_range_respect(profile, alloc(3, 0, 0)) is None


class TestSmQuota:
    def quota_profile(self):
        return integral_profile(
            6, 4, 4,
            [[4, 0, 0, 0]] * 3 + [[0, 4, 0, 0], [0, 0, 4, 0], [0, 0, 0, 4]],
        )

    def test_ceiling_failure_value(self):
        res = check_sm_quota_prop(self.quota_profile(), alloc(1, 1, 1, 1))
        assert not res.ok and res.alternative == 0

    def test_floor_value(self):
        res = check_sm_quota_prop(self.quota_profile(), alloc(2, 1, 1, 0))
        assert res.ok and not res.vacuous

    def test_mechanism_output(self):
        res = check_sm_quota_prop(self.quota_profile(), floor_im(self.quota_profile()))
        assert res.ok

    def test_vacuous_flag(self):
        profile = integral_profile(2, 2, 2, [[1, 1], [2, 0]])
        res = check_sm_quota_prop(profile, alloc(1, 1))
        assert res.ok and res.vacuous


def first_vote_mechanism(profile):
    return profile.votes[0]


def constant_mechanism(profile):
    inst = profile.instance
    return IntegralAllocation((inst.b,) + (0,) * (inst.m - 1))


class TestSearches:
    def test_dictator_cannot_gain(self):
        assert find_manipulation(first_vote_mechanism, 2, 2, 2) is None

    def test_first_vote_dictator_found(self):
        assert find_dictator(first_vote_mechanism, 2, 2, 2) == 0

    def test_constant_not_onto(self):
        missing = check_onto(constant_mechanism, 2, 2, 2)
        assert missing == alloc(0, 2)

    def test_floor_im_onto_nondictatorial(self):
        assert check_onto(floor_im, 2, 2, 2) is None
        assert find_dictator(floor_im, 2, 2, 2) is None

    @pytest.mark.parametrize("n,m,b", [(2, 2, 3), (3, 2, 2)])
    def test_floor_im_anonymous(self, n, m, b):
        assert check_anonymous(floor_im, n, m, b) is None

    def test_budget_enforced(self):
        with pytest.raises(BudgetExceededError):
            find_manipulation(floor_im, 2, 2, 2, max_evals=1)

    def test_anonymity_witness_found(self):
        assert check_anonymous(first_vote_mechanism, 2, 2, 1) is not None


class TestLinkedOrder:
    def test_chain_for_two_alternatives(self):
        order = linked_order(2, 2)
        assert [e.amounts for e in order.elements] == [(2, 0), (1, 1), (0, 2)]
        assert order.witnesses == ((), (0,), (1,))

    def test_rejects_degenerate(self):
        with pytest.raises(InvalidInputError):
            linked_order(2, 1)

    @pytest.mark.parametrize("m,b", [
        (m, b) for m in (2, 3, 4) for b in (1, 2, 3, 4) if (m - 1) * b >= 2
    ])
    def test_bijection_and_witnesses(self, m, b):
        order = linked_order(m, b)
        assert sorted(e.amounts for e in order.elements) == sorted(amount_vectors(m, b))
        for i, mates in enumerate(order.witnesses):
            for w in mates:
                assert w < i
                assert l1_disutility(order.elements[i], order.elements[w]) == 2
        if m >= 3:
            assert all(len(order.witnesses[i]) == 2
                       for i in range(2, len(order.elements)))
        assert all(len(order.witnesses[i]) >= 1
                   for i in range(1, len(order.elements)))


class TestSnap:
    def test_residue_tie_by_index(self):
        snapped = snap_to_integral(FractionalAllocation((F(3, 2), F(1, 2), F(1))))
        assert snapped.amounts == (2, 0, 1)
        assert l1_disutility(
            FractionalAllocation((F(3, 2), F(1, 2), F(1))), snapped
        ) == 1

    def test_integral_fixed_point(self):
        a = FractionalAllocation((F(2), F(0), F(1)))
        assert snap_to_integral(a).amounts == (2, 0, 1)

    def test_distance_bound_on_grid(self):
        # rational grid over three-way splits of 3
        for den in (1, 2, 3, 4, 5, 6):
            for i in range(3 * den + 1):
                for j in range(3 * den - i + 1):
                    p = FractionalAllocation(
                        (F(i, den), F(j, den), F(3 * den - i - j, den))
                    )
                    snapped = snap_to_integral(p)
                    assert l1_disutility(p, snapped) <= F(3, 2)
