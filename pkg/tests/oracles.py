"""Independent brute-force oracles used to validate the fast checkers.

Everything here quantifies literally over the definition it checks (subsets
of voters, multiplier candidates, output grids) and shares no code with the
implementations under test.
"""

from fractions import Fraction
from itertools import combinations

from budgetagg.core import IntegralAllocation, amount_vectors


def jr_violation_bruteforce(profile, allocation):
    """Search all cohesive groups for one with no represented member."""
    inst = profile.instance
    voters = range(inst.n)
    for size in range(1, inst.n + 1):
        if size * inst.b < inst.n:
            continue
        for group in combinations(voters, size):
            for j in range(inst.m):
                if not all(profile.votes[i].amounts[j] > 0 for i in group):
                    continue
                represented = any(
                    profile.votes[i].amounts[jj] > 0 and allocation.amounts[jj] > 0
                    for i in group
                    for jj in range(inst.m)
                )
                if not represented:
                    return j, frozenset(group)
    return None


def ejr_plus_violation_bruteforce(profile, allocation):
    """Search all (alternative, level, group) triples literally."""
    inst = profile.instance
    satisfaction = [
        sum(min(x, y) for x, y in zip(vote.amounts, allocation.amounts))
        for vote in profile.votes
    ]
    for j in range(inst.m):
        for level in range(1, inst.b + 1):
            eligible = [
                i for i in range(inst.n)
                if profile.votes[i].amounts[j] > allocation.amounts[j]
                and satisfaction[i] < level
            ]
            for size in range(1, len(eligible) + 1):
                if size * inst.b < level * inst.n:
                    continue
                for group in combinations(eligible, size):
                    return j, level, frozenset(group)
    return None


def divisor_round_bracket(z: Fraction, delta: Fraction) -> set[int]:
    """Values an amount of z may round to under the delta rounding.

    Closed-interval form: y is admissible when y - 1 + delta <= z <= y + delta,
    so boundaries admit both neighbors and z = 0 rounds to {0}.
    """
    out = set()
    y = 0
    while True:
        lo = y - 1 + delta
        hi = y + delta
        if lo > z:
            break
        if lo <= z <= hi:
            out.add(y)
        y += 1
    return out


def divisor_outcomes_by_multiplier(allocation, delta: Fraction) -> set[tuple[int, ...]]:
    """The multiplier definition of a stationary divisor method.

    Collects every positive multiplier at which some amount hits a rounding
    boundary, tries those and the midpoints between consecutive ones, and
    keeps every rounding combination that sums to the budget.
    """
    amounts = [Fraction(x) for x in allocation.amounts]
    b = int(sum(amounts))
    boundaries = set()
    for a in amounts:
        if a == 0:
            continue
        for y in range(b + 2):
            lam = (y + delta) / a
            if lam > 0:
                boundaries.add(lam)
            lam = (y - 1 + delta) / a
            if lam > 0:
                boundaries.add(lam)
    ordered = sorted(boundaries)
    candidates = list(ordered)
    for lo, hi in zip(ordered, ordered[1:]):
        candidates.append((lo + hi) / 2)
    results = set()
    for lam in candidates:
        options = [sorted(divisor_round_bracket(lam * a, delta)) for a in amounts]
        if any(not opts for opts in options):
            continue
        def expand(prefix, remaining):
            if sum(prefix) > b:
                return
            if not remaining:
                if sum(prefix) == b:
                    results.add(tuple(prefix))
                return
            for choice in remaining[0]:
                expand(prefix + [choice], remaining[1:])
        expand([], options)
    return results


def min_line_cost_outputs(profile, denominator: int = 8):
    """Two-alternative utilitarian oracle: grid-search the output segment.

    Returns the minimum total L1 disutility over outputs (x, b - x) with x
    on a rational grid that includes every vote coordinate.
    """
    inst = profile.instance
    assert inst.m == 2
    b = inst.b
    xs = {Fraction(k, denominator) for k in range(b * denominator + 1)}
    xs |= {Fraction(v.amounts[0]) for v in profile.votes}
    best = None
    for x in sorted(xs):
        out = (x, b - x)
        cost = sum(
            abs(Fraction(v.amounts[0]) - out[0]) + abs(Fraction(v.amounts[1]) - out[1])
            for v in profile.votes
        )
        if best is None or cost < best:
            best = cost
    return best


def closest_allocations(vote: IntegralAllocation, m: int, b: int):
    """All integral allocations at minimum L1 distance from the vote."""
    best = None
    out = []
    for amounts in amount_vectors(m, b):
        d = sum(abs(x - y) for x, y in zip(amounts, vote.amounts))
        if best is None or d < best:
            best = d
            out = [amounts]
        elif d == best:
            out.append(amounts)
    return [IntegralAllocation(a) for a in out]
