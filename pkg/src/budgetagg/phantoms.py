"""Fractional moving-phantom mechanisms with exact normalization search.

A phantom system for ``n`` voters is a family of ``n+1`` continuous,
non-decreasing functions ("phantoms") on the time interval [0, 1].  At every
time ``t`` the mechanism takes, per alternative, the median of the ``n``
votes together with the ``n+1`` phantom values; the output is the median
vector at the first time where the medians sum to the budget.

All phantoms here are piecewise linear with rational breakpoints, which is
enough for the two named systems and makes the normalization time an exact
rational: between consecutive candidate times (phantom breakpoints, phantom
crossings of vote values, and phantom-phantom crossings) the sum of medians
is linear, so the crossing with the budget can be solved exactly.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

from .core import (
    FractionalAllocation,
    Profile,
    ceil_frac,
)
from .errors import InvalidInputError, InvalidSystemError

ZERO = Fraction(0)
ONE = Fraction(1)


@dataclass(frozen=True)
class PiecewisePhantom:
    """A non-decreasing piecewise-linear function on [0, 1].

    ``breakpoints`` are (time, value) pairs with strictly increasing times;
    the first is (0, 0) and the last lies at time 1.  Values between
    breakpoints are linearly interpolated.
    """

    breakpoints: tuple[tuple[Fraction, Fraction], ...]

    def __post_init__(self):
        pts = tuple((Fraction(t), Fraction(v)) for t, v in self.breakpoints)
        object.__setattr__(self, "breakpoints", pts)
        if not pts or pts[0] != (ZERO, ZERO):
            raise InvalidSystemError("phantom must start at (0, 0)")
        if pts[-1][0] != ONE:
            raise InvalidSystemError("phantom must be defined up to time 1")
        for (t0, v0), (t1, v1) in zip(pts, pts[1:]):
            if t1 <= t0:
                raise InvalidSystemError("breakpoint times must strictly increase")
            if v1 < v0:
                raise InvalidSystemError("phantom values must be non-decreasing")

    def value(self, t: Fraction) -> Fraction:
        t = Fraction(t)
        if t < ZERO or t > ONE:
            raise InvalidInputError(f"time {t} outside [0, 1]")
        pts = self.breakpoints
        for (t0, v0), (t1, v1) in zip(pts, pts[1:]):
            if t <= t1:
                if v0 == v1:
                    return v0
                return v0 + (v1 - v0) * (t - t0) / (t1 - t0)
        return pts[-1][1]

    def segments(self):
        return zip(self.breakpoints, self.breakpoints[1:])

    @property
    def final_value(self) -> Fraction:
        return self.breakpoints[-1][1]


def _dedupe(points):
    out = []
    for t, v in points:
        if out and out[-1][0] == t:
            continue
        out.append((Fraction(t), Fraction(v)))
    return tuple(out)


@dataclass(frozen=True)
class PhantomSystem:
    """``n + 1`` phantoms indexed k = 0..n for budget ``b``.

    Besides the structural checks of each phantom, the k-th phantom must
    reach at least ``b * (n - k) / n`` at time 1; this bound is what
    guarantees that the sum of medians reaches the budget.
    """

    n: int
    b: int
    phantoms: tuple[PiecewisePhantom, ...]

    def __post_init__(self):
        if len(self.phantoms) != self.n + 1:
            raise InvalidSystemError(
                f"expected {self.n + 1} phantoms, got {len(self.phantoms)}"
            )
        for k, ph in enumerate(self.phantoms):
            if ph.final_value > self.b or any(v > self.b for _, v in ph.breakpoints):
                raise InvalidSystemError(f"phantom {k} exceeds the budget")
        _check_reach(self)

    def values_at(self, t: Fraction) -> tuple[Fraction, ...]:
        return tuple(ph.value(t) for ph in self.phantoms)


def _check_reach(system: PhantomSystem) -> None:
    for k, ph in enumerate(system.phantoms):
        bound = Fraction(system.b * (system.n - k), system.n)
        if ph.final_value < bound:
            raise InvalidSystemError(
                f"phantom {k} reaches {ph.final_value} at time 1, "
                f"needs at least {bound}; normalization not guaranteed"
            )


def independent_markets(n: int, b: int) -> PhantomSystem:
    """Phantoms rise simultaneously with equal spacing until capped at ``b``:
    phantom k follows ``min(b * (n - k) * t, b)``."""
    phantoms = []
    for k in range(n + 1):
        if k == n:
            phantoms.append(PiecewisePhantom(((ZERO, ZERO), (ONE, ZERO))))
            continue
        cap_time = Fraction(1, n - k)
        pts = [(ZERO, ZERO), (cap_time, Fraction(b)), (ONE, Fraction(b))]
        phantoms.append(PiecewisePhantom(_dedupe(pts)))
    return PhantomSystem(n, b, tuple(phantoms))


def utilitarian(n: int, b: int) -> PhantomSystem:
    """Phantoms rise to ``b`` one after another: phantom k stays at 0 until
    time k/n, then climbs linearly to ``b`` by time (k+1)/n."""
    phantoms = []
    for k in range(n + 1):
        if k == n:
            phantoms.append(PiecewisePhantom(((ZERO, ZERO), (ONE, ZERO))))
            continue
        pts = [
            (ZERO, ZERO),
            (Fraction(k, n), ZERO),
            (Fraction(k + 1, n), Fraction(b)),
            (ONE, Fraction(b)),
        ]
        phantoms.append(PiecewisePhantom(_dedupe(pts)))
    return PhantomSystem(n, b, tuple(phantoms))


def _clip_to_cap(ph: PiecewisePhantom, cap: Fraction) -> PiecewisePhantom:
    out: list[tuple[Fraction, Fraction]] = []
    for (t0, v0), (t1, v1) in ph.segments():
        if not out:
            out.append((t0, min(v0, cap)))
        if v1 <= cap:
            out.append((t1, v1))
            continue
        if v0 < cap:
            t_cross = t0 + (cap - v0) * (t1 - t0) / (v1 - v0)
            out.append((t_cross, cap))
        break
    if out[-1][0] < ONE:
        out.append((ONE, cap if out[-1][1] == cap else out[-1][1]))
    return PiecewisePhantom(_dedupe(out))


def upper_quota_cap(system: PhantomSystem) -> PhantomSystem:
    """Cap every phantom at the upper quota ``ceil(b * (n - k) / n)``.

    A phantom that does not reach its cap by time 1 is first extended: its
    breakpoints are rescaled into [0, 1/2] and a final linear segment climbs
    to the cap at time 1.  Capping an already-capped system is the identity.
    """
    n, b = system.n, system.b
    capped = []
    for k, ph in enumerate(system.phantoms):
        cap = Fraction(ceil_frac(Fraction(b * (n - k), n)))
        if ph.final_value < cap:
            pts = [(t / 2, v) for t, v in ph.breakpoints]
            pts.append((ONE, cap))
            ph = PiecewisePhantom(_dedupe(pts))
        capped.append(_clip_to_cap(ph, cap))
    return PhantomSystem(n, b, tuple(capped))


@dataclass(frozen=True)
class FractionalEvaluation:
    """Normalization time together with the median vector found there."""

    t_star: Fraction
    allocation: FractionalAllocation


def _as_fractional_votes(profile: Profile) -> list[tuple[Fraction, ...]]:
    return [tuple(Fraction(x) for x in vote.amounts) for vote in profile.votes]


def _median(values: list[Fraction]) -> Fraction:
    ordered = sorted(values)
    return ordered[len(ordered) // 2]


@lru_cache(maxsize=None)
def _system_times(system: PhantomSystem) -> frozenset:
    """Profile-independent candidates: breakpoints and phantom crossings."""
    times = {ZERO, ONE}
    for ph in system.phantoms:
        for t, _ in ph.breakpoints:
            times.add(t)
    phs = system.phantoms
    for i in range(len(phs)):
        for k in range(i + 1, len(phs)):
            _crossings(phs[i], phs[k], times)
    return frozenset(times)


@lru_cache(maxsize=None)
def _value_times(system: PhantomSystem, value: Fraction) -> frozenset:
    """Times at which some phantom passes through a vote value."""
    times = set()
    for ph in system.phantoms:
        for (t0, v0), (t1, v1) in ph.segments():
            if v0 < v1 and v0 <= value <= v1:
                times.add(t0 + (value - v0) * (t1 - t0) / (v1 - v0))
    return frozenset(times)


def _candidate_times(system: PhantomSystem, vote_values) -> list[Fraction]:
    times = set(_system_times(system))
    for val in vote_values:
        times |= _value_times(system, val)
    return sorted(times)

def _crossings(f: PiecewisePhantom, g: PiecewisePhantom, times: set) -> None:
    grid = sorted({t for t, _ in f.breakpoints} | {t for t, _ in g.breakpoints})
    for t0, t1 in zip(grid, grid[1:]):
        d0 = f.value(t0) - g.value(t0)
        d1 = f.value(t1) - g.value(t1)
        if (d0 < 0 < d1) or (d1 < 0 < d0):
            times.add(t0 + d0 * (t1 - t0) / (d0 - d1))


def _median_sum(system, votes_by_alt, t):
    phantom_values = list(system.values_at(t))
    medians = tuple(
        _median(list(column) + phantom_values) for column in votes_by_alt
    )
    return medians, sum(medians, ZERO)


def evaluate_fractional(profile: Profile, system: PhantomSystem) -> FractionalEvaluation:
    """Run the moving-phantom mechanism on a profile.

    The returned time is the earliest at which the medians sum to the
    budget; the allocation is the same for every valid normalization time.
    Integral profiles are accepted and treated as fractional input.
    """
    inst = profile.instance
    if system.n != inst.n or system.b != inst.b:
        raise InvalidInputError(
            f"system is for (n={system.n}, b={system.b}), "
            f"profile needs (n={inst.n}, b={inst.b})"
        )
    _check_reach(system)

    votes = _as_fractional_votes(profile)
    votes_by_alt = [tuple(v[j] for v in votes) for j in range(inst.m)]
    distinct_values = {x for vote in votes for x in vote}
    b = Fraction(inst.b)

    candidates = _candidate_times(system, distinct_values)
    sums: dict[int, Fraction] = {}

    def median_sum(idx: int) -> Fraction:
        if idx not in sums:
            sums[idx] = _median_sum(system, votes_by_alt, candidates[idx])[1]
        return sums[idx]

    if median_sum(len(candidates) - 1) < b:
        raise InvalidSystemError("sum of medians never reaches the budget")

    # the sum of medians is non-decreasing, so the first candidate at or
    # past the budget can be found by bisection
    lo, hi = 0, len(candidates) - 1
    while lo < hi:
        mid = (lo + hi) // 2
        if median_sum(mid) >= b:
            hi = mid
        else:
            lo = mid + 1
    if median_sum(lo) == b:
        t_star = candidates[lo]
    else:
        t_prev, s_prev = candidates[lo - 1], median_sum(lo - 1)
        t_star = t_prev + (b - s_prev) * (candidates[lo] - t_prev) / (
            median_sum(lo) - s_prev
        )

    medians, total = _median_sum(system, votes_by_alt, t_star)
    if total != b:
        raise InvalidSystemError(f"sum of medians is {total} at t={t_star}")
    return FractionalEvaluation(t_star, FractionalAllocation(medians))


def normalization_window(profile: Profile, system: PhantomSystem):
    """Earliest and latest time at which the medians sum to the budget.

    Useful for asserting that the output does not depend on the chosen
    normalization time.
    """
    inst = profile.instance
    evaluation = evaluate_fractional(profile, system)
    votes = _as_fractional_votes(profile)
    votes_by_alt = [tuple(v[j] for v in votes) for j in range(inst.m)]
    distinct_values = {x for vote in votes for x in vote}
    b = Fraction(inst.b)
    t_hi = evaluation.t_star
    for t in _candidate_times(system, distinct_values):
        if t <= t_hi:
            continue
        _, total = _median_sum(system, votes_by_alt, t)
        if total == b:
            t_hi = t
        elif total > b:
            break
    return evaluation.t_star, t_hi


def medians_at(profile: Profile, system: PhantomSystem, t: Fraction):
    """Median vector of votes and phantoms at an arbitrary time."""
    inst = profile.instance
    votes = _as_fractional_votes(profile)
    votes_by_alt = [tuple(v[j] for v in votes) for j in range(inst.m)]
    medians, _ = _median_sum(system, votes_by_alt, Fraction(t))
    return medians


@lru_cache(maxsize=None)
def _im_system(n: int, b: int) -> PhantomSystem:
    return independent_markets(n, b)


@lru_cache(maxsize=None)
def _util_system(n: int, b: int) -> PhantomSystem:
    return utilitarian(n, b)


def independent_markets_mechanism(profile: Profile) -> FractionalAllocation:
    inst = profile.instance
    return evaluate_fractional(profile, _im_system(inst.n, inst.b)).allocation


def utilitarian_mechanism(profile: Profile) -> FractionalAllocation:
    inst = profile.instance
    return evaluate_fractional(profile, _util_system(inst.n, inst.b)).allocation
