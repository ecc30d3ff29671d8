"""Pinned regression cases runnable from the command line.

Each case reproduces one documented counterexample or equivalence with its
exact expected values and reports expected versus actual.  Cases that have a
natural picture also know how to render one.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Callable

from .apportion import (
    ApportionmentOutcome,
    ByAlternativeIndex,
    ByLargerInput,
    compose,
    hamilton,
    quota_method,
    stationary_divisor,
)
from .axioms import check_ejr_plus, check_range_respect, check_sm_quota_prop, linked_order
from .core import (
    FractionalAllocation,
    IntegralAllocation,
    integral_profile,
    integral_profiles,
    l1_disutility,
)
from .phantoms import (
    evaluate_fractional,
    independent_markets,
    utilitarian_mechanism,
)
from .schedules import ceil_im, evaluate_integral, floor_im, floor_util, _schedule


@dataclass
class CaseResult:
    name: str
    passed: bool
    expected: str
    actual: str
    figure: Callable[[str], None] | None = None


def _frac(nums) -> FractionalAllocation:
    return FractionalAllocation(tuple(Fraction(x) for x in nums))


def _alloc(nums) -> IntegralAllocation:
    return IntegralAllocation(tuple(nums))


def _fmt(amounts) -> str:
    return "(" + ", ".join(str(x) for x in amounts) + ")"


def _snapshot_fig(profile, system, evaluation):
    def render(path: str) -> None:
        from .figures import phantom_snapshot

        inst = profile.instance
        phantom_values = system.values_at(evaluation.t_star)
        votes_by_alt = [
            [v.amounts[j] for v in profile.votes] for j in range(inst.m)
        ]
        phantom_by_alt = [list(phantom_values) for _ in range(inst.m)]
        phantom_snapshot(
            votes_by_alt, phantom_by_alt, evaluation.allocation.amounts, inst.b,
            f"normalization at t = {evaluation.t_star}", path,
        )

    return render


def _integral_snapshot_fig(profile, schedule, evaluation):
    def render(path: str) -> None:
        from .figures import phantom_snapshot

        inst = profile.instance
        positions = schedule.positions_at(evaluation.tau_star)
        votes_by_alt = [
            [v.amounts[j] for v in profile.votes] for j in range(inst.m)
        ]
        phantom_by_alt = [
            [positions[k][j] for k in range(inst.n + 1)] for j in range(inst.m)
        ]
        phantom_snapshot(
            votes_by_alt, phantom_by_alt, evaluation.allocation.amounts, inst.b,
            f"normalization at step {evaluation.tau_star}", path,
        )

    return render


def _hamilton_family_profile():
    votes = [[8, 0, 0, 0, 0, 0]] * 5
    for j in range(1, 6):
        vote = [7, 0, 0, 0, 0, 0]
        vote[j] = 1
        votes.append(vote)
    return integral_profile(10, 6, 8, votes)


def case_thm1_hamilton() -> CaseResult:
    profile = _hamilton_family_profile()
    system = independent_markets(10, 8)
    evaluation = evaluate_fractional(profile, system)
    expected_im = _frac([Fraction(80, 15)] + [Fraction(8, 15)] * 5)
    outcome = hamilton(evaluation.allocation)
    honest_pick = _alloc((5, 1, 1, 1, 0, 0))

    deviant = profile.replace_vote(9, _alloc((8, 0, 0, 0, 0, 0)))
    star = evaluate_fractional(deviant, system).allocation
    star_outcome = hamilton(star)
    truthful = profile.votes[9]
    honest_loss = l1_disutility(truthful, honest_pick)
    strict = all(
        l1_disutility(truthful, o) < honest_loss for o in star_outcome
    )

    passed = (
        evaluation.allocation == expected_im
        and len(outcome) == 10
        and honest_pick in outcome
        and strict
    )
    return CaseResult(
        "thm1-hamilton",
        passed,
        "output (16/3, 8/15 x5); 10 largest-remainder outcomes incl. "
        "(5,1,1,1,0,0); misreport (8,0,...) strictly better under every tie",
        f"output {_fmt(evaluation.allocation.amounts)}; {len(outcome)} outcomes; "
        f"contains pick: {honest_pick in outcome}; strict gain: {strict}",
        figure=_snapshot_fig(profile, system, evaluation),
    )


def case_thm1_quota() -> CaseResult:
    profile = integral_profile(4, 5, 4, [
        [3, 1, 0, 0, 0],
        [3, 0, 1, 0, 0],
        [3, 0, 0, 1, 0],
        [3, 0, 0, 0, 1],
    ])
    system = independent_markets(4, 4)
    evaluation = evaluate_fractional(profile, system)
    expected_honest = _frac([2, Fraction(1, 2), Fraction(1, 2), Fraction(1, 2), Fraction(1, 2)])
    honest_set = quota_method(evaluation.allocation)
    honest_pick = _alloc((2, 1, 1, 0, 0))

    deviant = profile.replace_vote(3, _alloc((4, 0, 0, 0, 0)))
    star = evaluate_fractional(deviant, system).allocation
    expected_star = _frac([Fraction(16, 7), Fraction(4, 7), Fraction(4, 7), Fraction(4, 7), 0])
    star_set = quota_method(star)
    star_pick = _alloc((3, 1, 0, 0, 0))
    truthful = profile.votes[3]
    honest_loss = l1_disutility(truthful, honest_pick)
    strict = all(l1_disutility(truthful, o) < honest_loss for o in star_set)

    passed = (
        evaluation.allocation == expected_honest
        and honest_pick in honest_set
        and star == expected_star
        and star_pick in star_set
        and strict
    )
    return CaseResult(
        "thm1-quota",
        passed,
        "outputs (2, 1/2 x4) and (16/7, 4/7 x3, 0); quota sets contain "
        "(2,1,1,0,0) and (3,1,0,0,0); strict manipulation",
        f"outputs {_fmt(evaluation.allocation.amounts)} and {_fmt(star.amounts)}; "
        f"picks present: {honest_pick in honest_set}, {star_pick in star_set}; "
        f"strict gain: {strict}",
        figure=_snapshot_fig(profile, system, evaluation),
    )


def _divisor_profile():
    return integral_profile(4, 4, 2, [
        [1, 1, 0, 0],
        [1, 0, 1, 0],
        [1, 0, 0, 1],
        [1, 1, 0, 0],
    ])


def case_thm1_divisor_tie() -> CaseResult:
    profile = _divisor_profile()
    system = independent_markets(4, 2)
    evaluation = evaluate_fractional(profile, system)
    expected_im = _frac([1, Fraction(1, 2), Fraction(1, 4), Fraction(1, 4)])
    outcome = stationary_divisor(evaluation.allocation, Fraction(1))
    expected_set = ApportionmentOutcome((_alloc((2, 0, 0, 0)), _alloc((1, 1, 0, 0))))
    picked = ByLargerInput().select(outcome, reference=evaluation.allocation)

    passed = (
        evaluation.allocation == expected_im
        and evaluation.t_star == Fraction(1, 8)
        and outcome.allocations == expected_set.allocations
        and picked == _alloc((2, 0, 0, 0))
    )
    return CaseResult(
        "thm1-divisor-tie",
        passed,
        "output (1, 1/2, 1/4, 1/4) at t = 1/8; Jefferson tie "
        "{(2,0,0,0), (1,1,0,0)}; larger-input pick (2,0,0,0)",
        f"output {_fmt(evaluation.allocation.amounts)} at t = {evaluation.t_star}; "
        f"set {[_fmt(a.amounts) for a in outcome]}; pick {_fmt(picked.amounts)}",
        figure=_snapshot_fig(profile, system, evaluation),
    )


def case_thm1_divisor() -> CaseResult:
    profile = _divisor_profile()
    system = independent_markets(4, 2)
    deviant = profile.replace_vote(3, _alloc((0, 2, 0, 0)))
    evaluation = evaluate_fractional(deviant, system)
    expected_im = _frac([Fraction(6, 7), Fraction(4, 7), Fraction(2, 7), Fraction(2, 7)])
    outcome = stationary_divisor(evaluation.allocation, Fraction(1))
    truthful = profile.votes[3]
    gain = l1_disutility(truthful, _alloc((2, 0, 0, 0))) - l1_disutility(
        truthful, _alloc((1, 1, 0, 0))
    )

    passed = (
        evaluation.allocation == expected_im
        and evaluation.t_star == Fraction(1, 7)
        and outcome.allocations == (_alloc((1, 1, 0, 0)),)
        and gain > 0
    )
    return CaseResult(
        "thm1-divisor",
        passed,
        "misreport output (6/7, 4/7, 2/7, 2/7) at t = 1/7; unique rounding "
        "(1,1,0,0); strict gain 2",
        f"output {_fmt(evaluation.allocation.amounts)} at t = {evaluation.t_star}; "
        f"set {[_fmt(a.amounts) for a in outcome]}; gain {gain}",
        figure=_snapshot_fig(deviant, system, evaluation),
    )


def case_prop1() -> CaseResult:
    reference = compose(utilitarian_mechanism, hamilton, ByAlternativeIndex())
    mismatches = 0
    total = 0
    for n, m, b in ((2, 3, 3), (3, 2, 3)):
        for profile in integral_profiles(n, m, b):
            total += 1
            if floor_util(profile) != reference(profile):
                mismatches += 1
    return CaseResult(
        "prop1",
        mismatches == 0,
        "floored Utilitarian equals Utilitarian + largest remainders "
        "(index ties) on all profiles of (2,3,3) and (3,2,3)",
        f"{total - mismatches}/{total} profiles agree",
    )


def _quota_example_profile():
    return integral_profile(6, 4, 4, [
        [4, 0, 0, 0],
        [4, 0, 0, 0],
        [4, 0, 0, 0],
        [0, 4, 0, 0],
        [0, 0, 4, 0],
        [0, 0, 0, 4],
    ])


def case_sec4_ceiling() -> CaseResult:
    profile = _quota_example_profile()
    ceiling_out = ceil_im(profile)
    ceiling_check = check_sm_quota_prop(profile, ceiling_out)
    floor_out = floor_im(profile)
    floor_check = check_sm_quota_prop(profile, floor_out)

    schedule = _schedule("ceil-im", 6, 4, 4)
    evaluation = evaluate_integral(profile, schedule)

    passed = (
        ceiling_out == _alloc((1, 1, 1, 1))
        and not ceiling_check.ok
        and ceiling_check.alternative == 0
        and floor_out.amounts[0] == 2
        and all(x in (0, 1) for x in floor_out.amounts[1:])
        and floor_check.ok
    )
    return CaseResult(
        "sec4-ceiling",
        passed,
        "ceiling variant outputs (1,1,1,1), violating the quota on "
        "alternative 1; floor variant gives 2 to alternative 1 and passes",
        f"ceiling {_fmt(ceiling_out.amounts)} (ok={ceiling_check.ok}, "
        f"alt={ceiling_check.alternative}); floor {_fmt(floor_out.amounts)} "
        f"(ok={floor_check.ok})",
        figure=_integral_snapshot_fig(profile, schedule, evaluation),
    )


def case_thm4_ejr() -> CaseResult:
    profile = integral_profile(3, 4, 3, [
        [1, 2, 0, 0],
        [1, 0, 2, 0],
        [1, 0, 0, 2],
    ])
    rr_ok = check_range_respect(profile, _alloc((1, 1, 1, 0)))
    rr_bad = check_range_respect(profile, _alloc((0, 1, 1, 1)))

    deviant = integral_profile(3, 4, 3, [
        [0, 3, 0, 0],
        [1, 0, 2, 0],
        [1, 0, 0, 2],
    ])
    v_small = check_ejr_plus(deviant, _alloc((1, 0, 1, 1)))
    v_group = check_ejr_plus(deviant, _alloc((0, 1, 1, 1)))
    disutility = l1_disutility(profile.votes[0], _alloc((1, 0, 1, 1)))

    passed = (
        rr_ok is None
        and rr_bad == 0
        and v_small is not None
        and (v_small.alternative, v_small.level, v_small.voters)
        == (1, 1, frozenset({0}))
        and v_group is not None
        and (v_group.alternative, v_group.voters) == (0, frozenset({1, 2}))
        and disutility == 4
    )
    return CaseResult(
        "thm4-ejr",
        passed,
        "range-respect pins alternative 1 to one unit; skipping alternative "
        "2 wrongs voter 1 (level 1), skipping alternative 1 wrongs voters "
        "{2,3}; voter 1's disutility 4 invites the misreport",
        f"range ok: {rr_ok is None}, bad at {rr_bad}; "
        f"witnesses {v_small} / {v_group}; disutility {disutility}",
    )


TABLE_ORDER = [
    "3000", "2010", "2100", "1110", "1200", "0210", "0300",
    "1020", "0120", "0030",
    "2001", "1101", "1011", "0201", "0111", "0021",
    "1002", "0102", "0012", "0003",
]


def case_table2_linked() -> CaseResult:
    order = linked_order(4, 3)
    got = ["".join(str(x) for x in e.amounts) for e in order.elements]
    distances_ok = all(
        l1_disutility(order.elements[i], order.elements[w]) == 2
        for i, mates in enumerate(order.witnesses)
        for w in mates
    )
    two_each = all(
        len(order.witnesses[i]) == 2 for i in range(2, len(order.elements))
    )
    passed = got == TABLE_ORDER and distances_ok and two_each

    def render(path: str) -> None:
        from .figures import adjacency_arcs

        adjacency_arcs(got, order.witnesses, "linked ordering of 4-way splits of 3", path)

    return CaseResult(
        "table2-linked",
        passed,
        "the 20-element ordering " + " ".join(TABLE_ORDER),
        " ".join(got) + f"; distances ok: {distances_ok}; two witnesses: {two_each}",
        figure=render,
    )


REPRO_CASES: dict[str, Callable[[], CaseResult]] = {
    "thm1-hamilton": case_thm1_hamilton,
    "thm1-quota": case_thm1_quota,
    "thm1-divisor-tie": case_thm1_divisor_tie,
    "thm1-divisor": case_thm1_divisor,
    "prop1": case_prop1,
    "sec4-ceiling": case_sec4_ceiling,
    "thm4-ejr": case_thm4_ejr,
    "table2-linked": case_table2_linked,
}
