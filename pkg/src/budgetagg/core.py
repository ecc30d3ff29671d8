"""Exact domain types for discrete budget aggregation.

A budget of ``b`` indivisible units is distributed over ``m`` alternatives by
aggregating the votes of ``n`` voters, where every vote is itself a
distribution of the budget.  All fractional quantities in this package are
`fractions.Fraction` values; no floating point enters any mechanism logic, so
medians, normalization times and tie detection are exact.

This module provides allocations and profiles (integral and fractional), the
L1 disutility model, vote averaging, canonicalization of profiles up to voter
permutation, the translation to approval-based committee elections, and the
JSON profile format used by the command line interface.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from itertools import permutations
from typing import Iterator, Union

from .errors import InvalidInputError

#: Exact rational carrier used for every fractional quantity.
Rat = Fraction

Amount = Union[int, Fraction]


@dataclass(frozen=True)
class Instance:
    """Problem size: ``n`` voters, ``m`` alternatives, budget ``b``."""

    n: int
    m: int
    b: int

    def __post_init__(self):
        if self.n < 1:
            raise InvalidInputError(f"need at least one voter, got n={self.n}")
        if self.m < 2:
            raise InvalidInputError(f"need at least two alternatives, got m={self.m}")
        if self.b < 1:
            raise InvalidInputError(f"budget must be positive, got b={self.b}")


@dataclass(frozen=True, order=True)
class IntegralAllocation:
    """A vector of non-negative integers distributing the whole budget."""

    amounts: tuple[int, ...]

    def __post_init__(self):
        for x in self.amounts:
            if not isinstance(x, int) or isinstance(x, bool):
                raise InvalidInputError(f"integral amounts must be ints, got {x!r}")
            if x < 0:
                raise InvalidInputError(f"amounts must be non-negative, got {x}")

    @property
    def budget(self) -> int:
        return sum(self.amounts)

    def validate_for(self, m: int, b: int) -> None:
        if len(self.amounts) != m:
            raise InvalidInputError(
                f"allocation has {len(self.amounts)} entries, expected {m}"
            )
        if self.budget != b:
            raise InvalidInputError(
                f"allocation sums to {self.budget}, expected budget {b}"
            )


@dataclass(frozen=True, order=True)
class FractionalAllocation:
    """A vector of non-negative rationals distributing the whole budget."""

    amounts: tuple[Fraction, ...]

    def __post_init__(self):
        object.__setattr__(
            self, "amounts", tuple(Fraction(x) for x in self.amounts)
        )
        for x in self.amounts:
            if x < 0:
                raise InvalidInputError(f"amounts must be non-negative, got {x}")

    @property
    def budget(self) -> Fraction:
        return sum(self.amounts, Fraction(0))

    def validate_for(self, m: int, b: int) -> None:
        if len(self.amounts) != m:
            raise InvalidInputError(
                f"allocation has {len(self.amounts)} entries, expected {m}"
            )
        if self.budget != b:
            raise InvalidInputError(
                f"allocation sums to {self.budget}, expected budget {b}"
            )


Allocation = Union[IntegralAllocation, FractionalAllocation]


def _validate_profile(instance: Instance, votes, kind) -> None:
    if len(votes) != instance.n:
        raise InvalidInputError(
            f"profile has {len(votes)} votes, expected n={instance.n}"
        )
    for i, vote in enumerate(votes, start=1):
        if not isinstance(vote, kind):
            raise InvalidInputError(f"vote {i} has wrong type {type(vote).__name__}")
        try:
            vote.validate_for(instance.m, instance.b)
        except InvalidInputError as exc:
            raise InvalidInputError(f"vote {i}: {exc}") from None


@dataclass(frozen=True)
class IntegralProfile:
    """An immutable tuple of integral votes, one per voter."""

    instance: Instance
    votes: tuple[IntegralAllocation, ...]

    def __post_init__(self):
        _validate_profile(self.instance, self.votes, IntegralAllocation)

    def replace_vote(self, voter: int, vote: IntegralAllocation) -> "IntegralProfile":
        """Profile with voter ``voter`` (0-based) reporting ``vote`` instead."""
        votes = self.votes[:voter] + (vote,) + self.votes[voter + 1:]
        return IntegralProfile(self.instance, votes)


@dataclass(frozen=True)
class FractionalProfile:
    """An immutable tuple of fractional votes, one per voter."""

    instance: Instance
    votes: tuple[FractionalAllocation, ...]

    def __post_init__(self):
        _validate_profile(self.instance, self.votes, FractionalAllocation)


Profile = Union[IntegralProfile, FractionalProfile]


def integral_profile(n: int, m: int, b: int, votes) -> IntegralProfile:
    """Convenience constructor from plain amount sequences."""
    return IntegralProfile(
        Instance(n, m, b), tuple(IntegralAllocation(tuple(v)) for v in votes)
    )


def fractional_profile(n: int, m: int, b: int, votes) -> FractionalProfile:
    return FractionalProfile(
        Instance(n, m, b), tuple(FractionalAllocation(tuple(v)) for v in votes)
    )


def amount_vectors(m: int, b: int) -> Iterator[tuple[int, ...]]:
    """All vectors of ``m`` non-negative integers summing to ``b``, in
    ascending lexicographic order."""
    if m == 1:
        yield (b,)
        return
    for first in range(b + 1):
        for rest in amount_vectors(m - 1, b - first):
            yield (first,) + rest


def integral_allocations(m: int, b: int) -> Iterator[IntegralAllocation]:
    """All integral allocations for ``m`` alternatives and budget ``b``,
    in ascending lexicographic order."""
    for amounts in amount_vectors(m, b):
        yield IntegralAllocation(amounts)


def integral_profiles(n: int, m: int, b: int) -> Iterator[IntegralProfile]:
    """All integral profiles in lexicographic order of their vote tuples."""
    instance = Instance(n, m, b)
    allocations = tuple(integral_allocations(m, b))

    def rec(prefix):
        if len(prefix) == n:
            yield IntegralProfile(instance, prefix)
            return
        for vote in allocations:
            yield from rec(prefix + (vote,))

    yield from rec(())


def _check_same_shape(p: Allocation, a: Allocation) -> None:
    if len(p.amounts) != len(a.amounts):
        raise InvalidInputError(
            f"dimension mismatch: {len(p.amounts)} vs {len(a.amounts)}"
        )
    if p.budget != a.budget:
        raise InvalidInputError(f"budget mismatch: {p.budget} vs {a.budget}")


def l1_disutility(p: Allocation, a: Allocation) -> Fraction:
    """L1 distance between a vote and an allocation.

    This is the disutility of a voter with truthful vote ``p`` towards the
    aggregate ``a``.  Symmetric, and zero exactly when the two coincide.
    """
    _check_same_shape(p, a)
    return sum((abs(Fraction(x) - Fraction(y)) for x, y in zip(p.amounts, a.amounts)),
               Fraction(0))


def overlap_disutility(p: IntegralAllocation, a: IntegralAllocation) -> Fraction:
    """Disutility computed through the committee lens: ``2b - 2 * overlap``.

    The overlap ``sum_j min(p_j, a_j)`` is the satisfaction of the voter in
    the approval-election translation; the result always equals
    :func:`l1_disutility` on integral inputs.
    """
    _check_same_shape(p, a)
    overlap = sum(min(x, y) for x, y in zip(p.amounts, a.amounts))
    return Fraction(2 * p.budget - 2 * overlap)


def average(profile: Profile) -> FractionalAllocation:
    """The coordinatewise average of all votes, as an exact rational vector."""
    n = profile.instance.n
    totals = [Fraction(0)] * profile.instance.m
    for vote in profile.votes:
        for j, x in enumerate(vote.amounts):
            totals[j] += Fraction(x)
    return FractionalAllocation(tuple(t / n for t in totals))


def is_single_minded(profile: Profile) -> bool:
    """True when every voter places the entire budget on one alternative."""
    b = profile.instance.b
    return all(max(vote.amounts) == b for vote in profile.votes)


def canonicalize(profile: IntegralProfile) -> IntegralProfile:
    """The lexicographically smallest reordering of the votes.

    Two profiles that are voter permutations of each other canonicalize to
    the same value, and the function is idempotent.
    """
    return IntegralProfile(profile.instance, tuple(sorted(profile.votes)))


def voter_permutations(profile: IntegralProfile) -> Iterator[IntegralProfile]:
    """Every reordering of the profile's votes (with repetition collapsed)."""
    seen = set()
    for perm in permutations(profile.votes):
        if perm not in seen:
            seen.add(perm)
            yield IntegralProfile(profile.instance, perm)


# --- approval-election translation ----------------------------------------
#
# Every alternative j is split into b ordered candidates (j, 1) .. (j, b);
# a vote putting x units on j approves the first x of them.  Committee size
# equals the budget, and |ballot ∩ committee| recovers the overlap term of
# the disutility.

Candidate = tuple[int, int]


@dataclass(frozen=True)
class ApprovalElection:
    """Approval-based committee election equivalent to an integral profile."""

    candidates: frozenset[Candidate]
    committee_size: int
    ballots: tuple[frozenset[Candidate], ...]

    def __post_init__(self):
        for i, ballot in enumerate(self.ballots, start=1):
            if len(ballot) != self.committee_size:
                raise InvalidInputError(
                    f"ballot {i} approves {len(ballot)} candidates, "
                    f"expected {self.committee_size}"
                )
            for (j, level) in ballot:
                if level > 1 and (j, level - 1) not in ballot:
                    raise InvalidInputError(
                        f"ballot {i} is not prefix-closed at candidate {(j, level)}"
                    )


def allocation_to_committee(a: IntegralAllocation) -> frozenset[Candidate]:
    """Committee corresponding to an integral allocation: the first ``a_j``
    candidates of every alternative ``j`` (1-based pairs)."""
    return frozenset(
        (j + 1, level)
        for j, x in enumerate(a.amounts)
        for level in range(1, x + 1)
    )


def to_approval(profile: IntegralProfile) -> ApprovalElection:
    """Translate an integral profile into an approval committee election."""
    m, b = profile.instance.m, profile.instance.b
    candidates = frozenset((j, level) for j in range(1, m + 1)
                           for level in range(1, b + 1))
    ballots = tuple(allocation_to_committee(vote) for vote in profile.votes)
    return ApprovalElection(candidates, b, ballots)


# --- JSON profile format ----------------------------------------------------
#
# {"n": int, "m": int, "b": int, "votes": [[amount, ...], ...]}
# Integral amounts are JSON integers; fractional amounts are "num/den"
# strings.  Parsing is strict: every vote must sum to the budget.


def parse_amount(value) -> Amount:
    if isinstance(value, bool):
        raise InvalidInputError(f"amounts must be integers or 'num/den' strings, got {value!r}")
    if isinstance(value, int):
        return value
    if isinstance(value, str):
        num, sep, den = value.partition("/")
        try:
            if sep:
                return Fraction(int(num), int(den))
            return Fraction(int(num))
        except (ValueError, ZeroDivisionError):
            raise InvalidInputError(f"malformed rational {value!r}") from None
    raise InvalidInputError(f"amounts must be integers or 'num/den' strings, got {value!r}")


def format_amount(value: Amount):
    """Integers stay JSON integers; proper fractions become "num/den"."""
    frac = Fraction(value)
    if frac.denominator == 1:
        return int(frac)
    return f"{frac.numerator}/{frac.denominator}"


def parse_profile(data) -> Profile:
    """Parse the JSON profile object, choosing the integral representation
    when every amount is an integer.

    Raises :class:`InvalidInputError` naming the offending voter when a vote
    does not sum to the budget or is malformed.
    """
    if not isinstance(data, dict):
        raise InvalidInputError("profile must be a JSON object")
    missing = {"n", "m", "b", "votes"} - set(data)
    if missing:
        raise InvalidInputError(f"profile object lacks keys: {sorted(missing)}")
    n, m, b = data["n"], data["m"], data["b"]
    for name, value in (("n", n), ("m", m), ("b", b)):
        if not isinstance(value, int) or isinstance(value, bool):
            raise InvalidInputError(f"{name} must be an integer, got {value!r}")
    votes_raw = data["votes"]
    if not isinstance(votes_raw, list) or len(votes_raw) != n:
        raise InvalidInputError(f"expected a list of {n} votes")
    parsed: list[list[Amount]] = []
    for i, vote in enumerate(votes_raw, start=1):
        if not isinstance(vote, list) or len(vote) != m:
            raise InvalidInputError(f"vote {i} must list {m} amounts")
        try:
            amounts = [parse_amount(x) for x in vote]
        except InvalidInputError as exc:
            raise InvalidInputError(f"vote {i}: {exc}") from None
        if any(x < 0 for x in amounts):
            raise InvalidInputError(f"vote {i} contains a negative amount")
        if sum(amounts) != b:
            raise InvalidInputError(
                f"vote {i} sums to {format_amount(sum(Fraction(x) for x in amounts))}, "
                f"expected the budget {b}"
            )
        parsed.append(amounts)
    instance = Instance(n, m, b)
    if all(isinstance(x, int) for vote in parsed for x in vote):
        return IntegralProfile(
            instance, tuple(IntegralAllocation(tuple(v)) for v in parsed)
        )
    return FractionalProfile(
        instance,
        tuple(FractionalAllocation(tuple(Fraction(x) for x in v)) for v in parsed),
    )


def profile_to_json(profile: Profile) -> dict:
    inst = profile.instance
    return {
        "n": inst.n,
        "m": inst.m,
        "b": inst.b,
        "votes": [[format_amount(x) for x in vote.amounts] for vote in profile.votes],
    }


def allocation_to_json(a: Allocation) -> list:
    return [format_amount(x) for x in a.amounts]


def parse_allocation(data) -> Allocation:
    if not isinstance(data, list):
        raise InvalidInputError("allocation must be a JSON array")
    amounts = [parse_amount(x) for x in data]
    if any(x < 0 for x in amounts):
        raise InvalidInputError("allocation contains a negative amount")
    if all(isinstance(x, int) for x in amounts):
        return IntegralAllocation(tuple(amounts))
    return FractionalAllocation(tuple(Fraction(x) for x in amounts))


def ceil_frac(x: Fraction) -> int:
    return math.ceil(x)


def floor_frac(x: Fraction) -> int:
    return math.floor(x)
