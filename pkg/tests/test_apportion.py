from fractions import Fraction as F

import pytest

from budgetagg.apportion import (
    ApportionmentOutcome,
    ByAlternativeIndex,
    ByLargerInput,
    Lexicographic,
    compose,
    composed_by_name,
    hamilton,
    method_by_name,
    quota_method,
    stationary_divisor,
)
from budgetagg.axioms import find_manipulation
from budgetagg.core import (
    FractionalAllocation,
    IntegralAllocation,
    integral_profile,
    integral_profiles,
    l1_disutility,
)
from budgetagg.errors import UnsupportedParameterError
from budgetagg.phantoms import independent_markets_mechanism, utilitarian_mechanism
from budgetagg.schedules import floor_util
from oracles import divisor_outcomes_by_multiplier


def frac(*xs):
    return FractionalAllocation(tuple(F(x) for x in xs))


def alloc(*xs):
    return IntegralAllocation(tuple(xs))


class TestHamilton:
    def test_thm1_outcome_set(self):
        out = hamilton(frac(F(80, 15), F(8, 15), F(8, 15), F(8, 15), F(8, 15), F(8, 15)))
        assert len(out) == 10
        assert alloc(5, 1, 1, 1, 0, 0) in out

    def test_half_residues(self):
        out = hamilton(frac(2, F(1, 2), F(1, 2), F(1, 2), F(1, 2)))
        assert len(out) == 6
        assert alloc(2, 1, 1, 0, 0) in out

    def test_integral_input(self):
        assert hamilton(alloc(3, 0, 1)).allocations == (alloc(3, 0, 1),)

    def test_quota_property(self):
        for a in (frac(F(5, 3), F(4, 3), 1), frac(F(1, 7), F(20, 7), F(7, 7))):
            for x in hamilton(a):
                for got, want in zip(x.amounts, a.amounts):
                    assert want.__floor__() <= got <= want.__ceil__()


class TestStationaryDivisor:
    def test_tie_case(self):
        out = stationary_divisor(frac(1, F(1, 2), F(1, 4), F(1, 4)), F(1))
        assert out.allocations == (alloc(1, 1, 0, 0), alloc(2, 0, 0, 0))

    def test_misreport_case(self):
        out = stationary_divisor(frac(F(6, 7), F(4, 7), F(2, 7), F(2, 7)), F(1))
        assert out.allocations == (alloc(1, 1, 0, 0),)

    def test_integral_input_contains_itself(self):
        out = stationary_divisor(alloc(2, 1, 0), F(1, 2))
        assert alloc(2, 1, 0) in out

    def test_rejects_bad_delta(self):
        with pytest.raises(UnsupportedParameterError):
            stationary_divisor(frac(1, 1), F(0))
        with pytest.raises(UnsupportedParameterError):
            stationary_divisor(frac(1, 1), F(3, 2))

    @pytest.mark.parametrize("delta", [F(1), F(1, 2), F(1, 3)])
    def test_matches_multiplier_definition(self, delta):
        inputs = [
            frac(1, F(1, 2), F(1, 4), F(1, 4)),
            frac(F(6, 7), F(4, 7), F(2, 7), F(2, 7)),
            frac(2, F(1, 2), F(1, 2)),
            frac(F(5, 3), F(4, 3)),
            frac(0, 2, 1),
        ]
        for a in inputs:
            ours = {x.amounts for x in stationary_divisor(a, delta)}
            oracle = divisor_outcomes_by_multiplier(a, delta)
            assert ours == oracle


class TestQuotaMethod:
    def test_half_residue_input(self):
        out = quota_method(frac(2, F(1, 2), F(1, 2), F(1, 2), F(1, 2)))
        assert alloc(2, 1, 1, 0, 0) in out

    def test_misreport_input(self):
        out = quota_method(frac(F(16, 7), F(4, 7), F(4, 7), F(4, 7), 0))
        assert alloc(3, 1, 0, 0, 0) in out

    def test_integral_inputs_fixed_points(self):
        for a in (alloc(2, 1, 0), alloc(0, 0, 3), alloc(1, 1, 1)):
            assert quota_method(a).allocations == (a,)

    def test_upper_quota_respected(self):
        for a in (frac(F(5, 3), F(4, 3), 1), frac(2, F(1, 2), F(1, 2), F(1, 2), F(1, 2))):
            for x in quota_method(a):
                for got, want in zip(x.amounts, a.amounts):
                    assert got <= want.__ceil__()


class TestTieBreaks:
    def test_by_index_prefers_low_indices(self):
        out = hamilton(frac(F(80, 15), F(8, 15), F(8, 15), F(8, 15), F(8, 15), F(8, 15)))
        assert ByAlternativeIndex().select(out) == alloc(5, 1, 1, 1, 0, 0)

    def test_lexicographic_smallest(self):
        out = ApportionmentOutcome((alloc(2, 0, 0), alloc(1, 1, 0), alloc(0, 2, 0)))
        assert Lexicographic().select(out) == alloc(0, 2, 0)

    def test_by_larger_input(self):
        outcome = ApportionmentOutcome((alloc(2, 0, 0, 0), alloc(1, 1, 0, 0)))
        reference = frac(1, F(1, 2), F(1, 4), F(1, 4))
        assert ByLargerInput().select(outcome, reference=reference) == alloc(2, 0, 0, 0)
        assert ByLargerInput(input=reference).select(outcome) == alloc(2, 0, 0, 0)


class TestCompose:
    def test_matches_floor_util_on_sample(self):
        mech = compose(utilitarian_mechanism, hamilton, ByAlternativeIndex())
        for profile in integral_profiles(2, 2, 3):
            assert mech(profile) == floor_util(profile)

    def test_by_name(self):
        mech = composed_by_name("compose:utilitarian+hamilton+index")
        profile = integral_profile(2, 3, 4, [[4, 0, 0], [3, 1, 0]])
        assert mech(profile) == floor_util(profile)
        assert method_by_name("divisor=1/2")(frac(1, 1)).allocations == (alloc(1, 1),)

    def test_hamilton_im_manipulable_at_thm1_profile(self):
        votes = [[8, 0, 0, 0, 0, 0]] * 5
        for j in range(1, 6):
            vote = [7, 0, 0, 0, 0, 0]
            vote[j] = 1
            votes.append(vote)
        profile = integral_profile(10, 6, 8, votes)
        mech = compose(independent_markets_mechanism, hamilton, ByAlternativeIndex())
        witness = find_manipulation(mech, 10, 6, 8, profiles=[profile])
        assert witness is not None
        assert witness.gain > 0

    def test_divisor_larger_input_manipulable(self):
        profile = integral_profile(4, 4, 2, [[1, 1, 0, 0], [1, 0, 1, 0],
                                             [1, 0, 0, 1], [1, 1, 0, 0]])
        mech = compose(
            independent_markets_mechanism,
            lambda a: stationary_divisor(a, F(1)),
            ByLargerInput(),
        )
        honest = mech(profile)
        assert honest == alloc(2, 0, 0, 0)
        deviant = mech(profile.replace_vote(3, alloc(0, 2, 0, 0)))
        assert deviant == alloc(1, 1, 0, 0)
        truthful = profile.votes[3]
        assert l1_disutility(truthful, deviant) < l1_disutility(truthful, honest)
