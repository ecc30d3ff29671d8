"""Non-resolute apportionment methods and composition with mechanisms.

An apportionment method rounds a fractional budget vector to the set of
integral vectors it may legitimately produce; a tie-breaking policy then
selects a single one.  Composing a fractional mechanism with a method and a
policy yields an integral mechanism.  The methods here are Hamilton's
largest-remainder method, the stationary divisor family (Jefferson at
delta=1, Webster at delta=1/2), and the quota method.

Tie paths are enumerated exhaustively, so the outcome sets are exact; this
is what lets regression tests confirm that a documented tie really exists
instead of assuming a particular resolution.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from typing import Callable, Union

from .core import (
    FractionalAllocation,
    IntegralAllocation,
    Profile,
)
from .errors import InvalidInputError, UnsupportedParameterError
from .phantoms import independent_markets_mechanism, utilitarian_mechanism

AnyAllocation = Union[IntegralAllocation, FractionalAllocation]


@dataclass(frozen=True)
class ApportionmentOutcome:
    """The full set of integral allocations a method may return."""

    allocations: tuple[IntegralAllocation, ...]

    def __post_init__(self):
        ordered = tuple(sorted(set(self.allocations)))
        if not ordered:
            raise InvalidInputError("an apportionment outcome cannot be empty")
        object.__setattr__(self, "allocations", ordered)

    def __iter__(self):
        return iter(self.allocations)

    def __len__(self):
        return len(self.allocations)

    def __contains__(self, item):
        return item in self.allocations


def _amounts(a: AnyAllocation) -> tuple[Fraction, ...]:
    return tuple(Fraction(x) for x in a.amounts)


def hamilton(a: AnyAllocation) -> ApportionmentOutcome:
    """Largest-remainder rounding.

    Every alternative keeps the floor of its amount; the leftover units go
    to the alternatives with the largest fractional remainders, one outcome
    per way of choosing among tied remainders.
    """
    amounts = _amounts(a)
    floors = [math.floor(x) for x in amounts]
    residues = [x - f for x, f in zip(amounts, floors)]
    k = sum(residues)
    if k.denominator != 1:
        raise InvalidInputError(f"input does not sum to an integer: {sum(amounts)}")
    k = int(k)
    if k == 0:
        return ApportionmentOutcome((IntegralAllocation(tuple(floors)),))
    threshold = sorted(residues, reverse=True)[k - 1]
    mandatory = [j for j, r in enumerate(residues) if r > threshold]
    optional = [j for j, r in enumerate(residues) if r == threshold]
    results = []
    for extra in combinations(optional, k - len(mandatory)):
        out = list(floors)
        for j in mandatory:
            out[j] += 1
        for j in extra:
            out[j] += 1
        results.append(IntegralAllocation(tuple(out)))
    return ApportionmentOutcome(tuple(results))


def stationary_divisor(a: AnyAllocation, delta: Fraction) -> ApportionmentOutcome:
    """Highest-averages method with divisor sequence ``delta, 1 + delta, ...``.

    Each of the ``b`` units goes to an alternative maximizing
    ``amount / (already_assigned + delta)``; all tie paths are explored.
    Only ``0 < delta <= 1`` is supported.
    """
    delta = Fraction(delta)
    if not 0 < delta <= 1:
        raise UnsupportedParameterError(f"delta must be in (0, 1], got {delta}")
    amounts = _amounts(a)
    b = sum(amounts)
    if b.denominator != 1:
        raise InvalidInputError(f"input does not sum to an integer: {b}")
    b = int(b)
    m = len(amounts)
    results: set[tuple[int, ...]] = set()
    seen: set[tuple[int, ...]] = set()

    def assign(gamma: tuple[int, ...], remaining: int) -> None:
        if gamma in seen:
            return
        seen.add(gamma)
        if remaining == 0:
            results.add(gamma)
            return
        quotients = [
            (amounts[j] / (gamma[j] + delta), j) for j in range(m) if amounts[j] > 0
        ]
        best = max(q for q, _ in quotients)
        for q, j in quotients:
            if q == best:
                bumped = gamma[:j] + (gamma[j] + 1,) + gamma[j + 1:]
                assign(bumped, remaining - 1)

    assign((0,) * m, b)
    return ApportionmentOutcome(
        tuple(IntegralAllocation(g) for g in results)
    )


def quota_method(a: AnyAllocation) -> ApportionmentOutcome:
    """Sequential Jefferson constrained by upper quotas.

    Units are assigned one round at a time to an eligible alternative
    minimizing ``(assigned + 1) / amount``; an alternative is eligible in
    round k while its assignment stays below ``amount * k / total``.  All
    tie paths are explored.  Zero-amount alternatives are never eligible.
    """
    amounts = _amounts(a)
    total = sum(amounts)
    if total.denominator != 1:
        raise InvalidInputError(f"input does not sum to an integer: {total}")
    b = int(total)
    m = len(amounts)
    results: set[tuple[int, ...]] = set()
    seen: set[tuple[int, tuple[int, ...]]] = set()

    def assign(gamma: tuple[int, ...], k: int) -> None:
        if (k, gamma) in seen:
            return
        seen.add((k, gamma))
        if k > b:
            results.add(gamma)
            return
        eligible = [
            j for j in range(m)
            if amounts[j] > 0 and gamma[j] < amounts[j] * k / total
        ]
        best = min((gamma[j] + 1) / amounts[j] for j in eligible)
        for j in eligible:
            if (gamma[j] + 1) / amounts[j] == best:
                bumped = gamma[:j] + (gamma[j] + 1,) + gamma[j + 1:]
                assign(bumped, k + 1)

    assign((0,) * m, 1)
    return ApportionmentOutcome(
        tuple(IntegralAllocation(g) for g in results)
    )


# --- tie-breaking policies --------------------------------------------------


class TieBreak:
    """Deterministic selection of one member of an outcome set."""

    def select(self, outcome: ApportionmentOutcome,
               reference: FractionalAllocation | None = None) -> IntegralAllocation:
        raise NotImplementedError


class ByAlternativeIndex(TieBreak):
    """Favor lower-indexed alternatives: pick the lexicographically largest
    member, which routes contested units to the smallest indices."""

    def select(self, outcome, reference=None):
        return max(outcome.allocations)


class Lexicographic(TieBreak):
    """Pick the lexicographically smallest member."""

    def select(self, outcome, reference=None):
        return min(outcome.allocations)


@dataclass(frozen=True)
class ByLargerInput(TieBreak):
    """Favor alternatives with larger amounts in the input allocation,
    breaking residual ties by alternative index.

    The input may be fixed at construction; otherwise it is the fractional
    allocation the method was applied to, supplied at selection time.
    """

    input: FractionalAllocation | None = None

    def select(self, outcome, reference=None):
        ref = self.input if self.input is not None else reference
        if ref is None:
            raise InvalidInputError("ByLargerInput needs the input allocation")
        order = sorted(
            range(len(ref.amounts)), key=lambda j: (-ref.amounts[j], j)
        )
        return max(
            outcome.allocations, key=lambda x: tuple(x.amounts[j] for j in order)
        )


FractionalMechanism = Callable[[Profile], FractionalAllocation]
Method = Callable[[FractionalAllocation], ApportionmentOutcome]


def compose(mechanism: FractionalMechanism, method: Method,
            tie_break: TieBreak) -> Callable[[Profile], IntegralAllocation]:
    """Integral mechanism: profile -> tie_break(method(mechanism(profile))).

    A ``ByLargerInput`` policy without a fixed input binds to the fractional
    output of the mechanism at call time.
    """

    def mech(profile: Profile) -> IntegralAllocation:
        fractional = mechanism(profile)
        outcome = method(fractional)
        return tie_break.select(outcome, reference=fractional)

    return mech


FRACTIONAL_MECHANISMS: dict[str, FractionalMechanism] = {
    "im": independent_markets_mechanism,
    "utilitarian": utilitarian_mechanism,
}

TIE_BREAKS: dict[str, Callable[[], TieBreak]] = {
    "index": ByAlternativeIndex,
    "larger-input": ByLargerInput,
    "lex": Lexicographic,
}


def method_by_name(name: str) -> Method:
    """Resolve 'hamilton', 'quota', or 'divisor=<delta>' to a method."""
    if name == "hamilton":
        return hamilton
    if name == "quota":
        return quota_method
    if name.startswith("divisor="):
        delta = Fraction(name.split("=", 1)[1])
        return lambda a: stationary_divisor(a, delta)
    raise InvalidInputError(f"unknown apportionment method {name!r}")


def composed_by_name(spec: str) -> Callable[[Profile], IntegralAllocation]:
    """Resolve 'compose:<mech>+<method>+<tiebreak>' to an integral mechanism."""
    body = spec.split(":", 1)[1] if spec.startswith("compose:") else spec
    parts = body.split("+")
    if len(parts) != 3:
        raise InvalidInputError(
            f"expected <mechanism>+<method>+<tiebreak>, got {body!r}"
        )
    mech_name, method_name, tb_name = parts
    if mech_name not in FRACTIONAL_MECHANISMS:
        raise InvalidInputError(f"unknown fractional mechanism {mech_name!r}")
    if tb_name not in TIE_BREAKS:
        raise InvalidInputError(f"unknown tie-break {tb_name!r}")
    return compose(
        FRACTIONAL_MECHANISMS[mech_name],
        method_by_name(method_name),
        TIE_BREAKS[tb_name](),
    )
