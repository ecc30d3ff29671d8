"""Axiom checkers and exhaustive property searches.

Representation axioms (justified representation and its EJR+ strengthening)
are imported from approval-based committee voting through the budget
translation in :mod:`budgetagg.core`; both have polynomial checkers whose
group quantifiers collapse to maximal candidate groups.  Truthfulness,
anonymity, ontoness and dictatorship are verified by exhaustive search over
profile spaces, which is feasible at the desk scale where the impossibility
results live.

Threshold comparisons of the form ``|group| >= n / b`` are evaluated as
integer cross products, so no division ever happens.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import permutations
from typing import Callable, Iterable

from .apportion import ByAlternativeIndex, hamilton
from .core import (
    FractionalAllocation,
    IntegralAllocation,
    IntegralProfile,
    average,
    integral_allocations,
    integral_profiles,
    is_single_minded,
    l1_disutility,
)
from .errors import BudgetExceededError, InvalidInputError

IntegralMechanism = Callable[[IntegralProfile], IntegralAllocation]


# --- representation axioms ---------------------------------------------------


@dataclass(frozen=True)
class JrViolation:
    """A cohesive group left entirely unrepresented.

    All voters in the group put a positive amount on the alternative, the
    group is large enough (``|group| * b >= n``), and no member shares any
    funded alternative with the allocation.
    """

    alternative: int
    voters: frozenset[int]


def _represented(vote: IntegralAllocation, a: IntegralAllocation) -> bool:
    return any(x > 0 and y > 0 for x, y in zip(vote.amounts, a.amounts))


def check_jr(profile: IntegralProfile, a: IntegralAllocation) -> JrViolation | None:
    """Justified representation check; ``None`` means the axiom holds.

    A violation exists exactly when, for some alternative, the unrepresented
    voters supporting it form a cohesive group, so it suffices to test the
    maximal group per alternative.
    """
    inst = profile.instance
    a.validate_for(inst.m, inst.b)
    unrepresented = [
        i for i, vote in enumerate(profile.votes) if not _represented(vote, a)
    ]
    for j in range(inst.m):
        group = frozenset(
            i for i in unrepresented if profile.votes[i].amounts[j] > 0
        )
        if len(group) * inst.b >= inst.n:
            return JrViolation(j, group)
    return None


def jr_outcomes(profile: IntegralProfile) -> tuple[IntegralAllocation, ...]:
    """All allocations satisfying JR for the profile, in lexicographic order.

    May be empty for profiles whose cohesive groups cannot all be covered;
    emptiness is an ordinary result, not an error.
    """
    inst = profile.instance
    return tuple(
        a for a in integral_allocations(inst.m, inst.b)
        if check_jr(profile, a) is None
    )


@dataclass(frozen=True)
class EjrPlusViolation:
    """A group demanding ``level`` units of representation and denied it.

    Every member wants more of the alternative than it got and is satisfied
    below ``level``; the group size clears ``level * n / b``.
    """

    alternative: int
    level: int
    voters: frozenset[int]


def check_ejr_plus(profile: IntegralProfile, a: IntegralAllocation) -> EjrPlusViolation | None:
    """EJR+ check; ``None`` means the axiom holds.

    Scans alternatives and levels in increasing order and tests the maximal
    qualifying voter group, which is equivalent to quantifying over all
    groups.
    """
    inst = profile.instance
    a.validate_for(inst.m, inst.b)
    satisfaction = [
        sum(min(x, y) for x, y in zip(vote.amounts, a.amounts))
        for vote in profile.votes
    ]
    for j in range(inst.m):
        supporters = [
            i for i, vote in enumerate(profile.votes)
            if vote.amounts[j] > a.amounts[j]
        ]
        for level in range(1, inst.b + 1):
            group = frozenset(i for i in supporters if satisfaction[i] < level)
            if len(group) * inst.b >= level * inst.n:
                return EjrPlusViolation(j, level, group)
    return None


def check_range_respect(profile: IntegralProfile, a: IntegralAllocation) -> int | None:
    """Return the first alternative whose amount leaves the vote range."""
    inst = profile.instance
    a.validate_for(inst.m, inst.b)
    for j in range(inst.m):
        column = [vote.amounts[j] for vote in profile.votes]
        if not min(column) <= a.amounts[j] <= max(column):
            return j
    return None


@dataclass(frozen=True)
class QuotaCheck:
    """Result of the single-minded quota-proportionality check."""

    ok: bool
    vacuous: bool
    alternative: int | None = None


def check_sm_quota_prop(profile: IntegralProfile, a: IntegralAllocation) -> QuotaCheck:
    """On single-minded profiles, every output amount must be the floor or
    ceiling of the average; on other profiles the check is vacuously ok."""
    inst = profile.instance
    a.validate_for(inst.m, inst.b)
    if not is_single_minded(profile):
        return QuotaCheck(ok=True, vacuous=True)
    mean = average(profile)
    for j in range(inst.m):
        lo = mean.amounts[j].__floor__()
        hi = mean.amounts[j].__ceil__()
        if not lo <= a.amounts[j] <= hi:
            return QuotaCheck(ok=False, vacuous=False, alternative=j)
    return QuotaCheck(ok=True, vacuous=False)


# --- exhaustive searches ------------------------------------------------------


@dataclass(frozen=True)
class ManipulationWitness:
    """A profitable misreport: deviating strictly lowers the disutility of
    the voter with respect to her truthful vote."""

    profile: IntegralProfile
    voter: int
    misreport: IntegralAllocation
    honest_output: IntegralAllocation
    deviant_output: IntegralAllocation
    gain: Fraction


class _Budgeted:
    """Counts mechanism evaluations against an optional budget."""

    def __init__(self, mechanism: IntegralMechanism, max_evals: int | None):
        self.mechanism = mechanism
        self.max_evals = max_evals
        self.evals = 0
        self.cache: dict[tuple, IntegralAllocation] = {}

    def __call__(self, profile: IntegralProfile) -> IntegralAllocation:
        key = tuple(vote.amounts for vote in profile.votes)
        hit = self.cache.get(key)
        if hit is not None:
            return hit
        self.evals += 1
        if self.max_evals is not None and self.evals > self.max_evals:
            raise BudgetExceededError(
                f"exceeded the budget of {self.max_evals} mechanism evaluations"
            )
        out = self.mechanism(profile)
        self.cache[key] = out
        return out


def find_manipulation(
    mechanism: IntegralMechanism,
    n: int,
    m: int,
    b: int,
    profiles: Iterable[IntegralProfile] | None = None,
    max_evals: int | None = None,
) -> ManipulationWitness | None:
    """Search profiles, voters, and misreports for a profitable deviation.

    Scans the full profile space in lexicographic order unless ``profiles``
    restricts it; returns the first witness found, or ``None``.  Exceeding
    ``max_evals`` mechanism evaluations raises
    :class:`~budgetagg.errors.BudgetExceededError`.
    """
    run = _Budgeted(mechanism, max_evals)
    misreports = tuple(integral_allocations(m, b))
    space = profiles if profiles is not None else integral_profiles(n, m, b)
    for profile in space:
        honest = run(profile)
        for i in range(n):
            truthful = profile.votes[i]
            honest_loss = l1_disutility(truthful, honest)
            for report in misreports:
                if report == truthful:
                    continue
                deviant = run(profile.replace_vote(i, report))
                gain = honest_loss - l1_disutility(truthful, deviant)
                if gain > 0:
                    return ManipulationWitness(
                        profile, i, report, honest, deviant, gain
                    )
    return None


def check_anonymous(
    mechanism: IntegralMechanism, n: int, m: int, b: int
) -> tuple[IntegralProfile, IntegralProfile] | None:
    """Return a profile and a voter permutation of it with different
    outputs, or ``None`` when the mechanism is anonymous on the instance."""
    for profile in integral_profiles(n, m, b):
        expected = mechanism(profile)
        for perm in permutations(profile.votes):
            if perm == profile.votes:
                continue
            permuted = IntegralProfile(profile.instance, perm)
            if mechanism(permuted) != expected:
                return profile, permuted
    return None


def check_onto(
    mechanism: IntegralMechanism, n: int, m: int, b: int
) -> IntegralAllocation | None:
    """Return the lexicographically smallest unreachable allocation, or
    ``None`` when every allocation is some profile's output."""
    missing = set(integral_allocations(m, b))
    for profile in integral_profiles(n, m, b):
        missing.discard(mechanism(profile))
        if not missing:
            return None
    return min(missing)


def find_dictator(mechanism: IntegralMechanism, n: int, m: int, b: int) -> int | None:
    """Voter whose vote the mechanism always returns, or ``None``.

    For integral mechanisms the rank-1 condition collapses to exact
    agreement with the dictator's vote, since a vote is the unique closest
    integral allocation to itself.
    """
    candidates = set(range(n))
    for profile in integral_profiles(n, m, b):
        out = mechanism(profile)
        candidates = {i for i in candidates if profile.votes[i] == out}
        if not candidates:
            return None
    return min(candidates)


# --- linked ordering of the integral allocations -----------------------------


@dataclass(frozen=True)
class LinkedOrder:
    """An ordering of all integral allocations with adjacency witnesses.

    ``witnesses[i]`` lists indices of earlier elements at L1 distance
    exactly 2 from element i.  For three or more alternatives every element
    from the third onward carries two witnesses; with two alternatives the
    allocations form a path and only a single-witness chain exists.
    """

    elements: tuple[IntegralAllocation, ...]
    witnesses: tuple[tuple[int, ...], ...]


def _distance2(x: tuple[int, ...], y: tuple[int, ...]) -> bool:
    return sum(abs(p - q) for p, q in zip(x, y)) == 2


def linked_order(m: int, b: int) -> LinkedOrder:
    """Order the allocations so each one touches two earlier ones.

    Three phases: first all allocations supported on the first three
    alternatives with at most one unit on the third, zig-zagging between
    moves on the first and second alternatives; then the remaining third
    coordinates in increasing order; then, alternative by alternative, the
    positive amounts of every later alternative in increasing order.
    """
    if (m - 1) * b < 2:
        raise InvalidInputError(
            f"need (m - 1) * b >= 2 for a linked ordering, got m={m}, b={b}"
        )
    if m == 2:
        elems = [(b - s, s) for s in range(b + 1)]
        witnesses = [tuple() if i == 0 else (i - 1,) for i in range(len(elems))]
        return LinkedOrder(
            tuple(IntegralAllocation(e) for e in elems), tuple(witnesses)
        )

    elements: list[tuple[int, ...]] = []
    index: dict[tuple[int, ...], int] = {}
    witnesses: list[tuple[int, ...]] = []

    def push(vec: tuple[int, ...], mates: tuple[tuple[int, ...], ...]) -> None:
        for mate in mates:
            assert _distance2(vec, mate) and index[mate] < len(elements)
        index[vec] = len(elements)
        elements.append(vec)
        witnesses.append(tuple(index[mate] for mate in mates))

    def vec(*coords: int) -> tuple[int, ...]:
        return tuple(coords) + (0,) * (m - len(coords))

    # Phase 1: third coordinate at most 1, zig-zag on the first two.  Every
    # element after the second is at distance 2 from its two predecessors.
    for s in range(b + 1):
        flat = vec(b - s, s, 0)
        push(flat, () if s == 0 else (elements[-1], elements[-2]))
        if b - s - 1 >= 0:
            raised = vec(b - s - 1, s, 1)
            if len(elements) == 1:
                push(raised, (elements[-1],))
            else:
                push(raised, (elements[-1], elements[-2]))

    # Phases 2 and 3: grow one later coordinate at a time; the two witnesses
    # shift the freshly grown unit back onto the first or second alternative.
    for j in range(2, m):
        start = 2 if j == 2 else 1
        for level in range(start, b + 1):
            prefixes = sorted(
                _compositions(j, b - level), reverse=True
            )
            for prefix in prefixes:
                target = prefix + (level,) + (0,) * (m - j - 1)
                lower = prefix[0] + 1, *prefix[1:], level - 1
                upper = prefix[0], prefix[1] + 1, *prefix[2:], level - 1
                mates = (
                    tuple(lower) + (0,) * (m - j - 1),
                    tuple(upper) + (0,) * (m - j - 1),
                )
                push(target, mates)

    return LinkedOrder(
        tuple(IntegralAllocation(e) for e in elements), tuple(witnesses)
    )


def _compositions(m: int, b: int) -> list[tuple[int, ...]]:
    if m == 1:
        return [(b,)]
    out = []
    for first in range(b + 1):
        for rest in _compositions(m - 1, b - first):
            out.append((first,) + rest)
    return out


def snap_to_integral(p: FractionalAllocation) -> IntegralAllocation:
    """Closest integral allocation, by largest-remainder rounding with index
    tie-breaking; the L1 distance to the input is at most m/2."""
    return ByAlternativeIndex().select(hamilton(p))
