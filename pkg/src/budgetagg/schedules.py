"""Integral moving-phantom mechanisms.

Phantoms here move in unit steps over discrete time, one phantom of one
alternative per step, over a horizon of ``z = b * m * (n + 1)`` steps.  The
mechanism steps time forward until the per-alternative medians of votes and
phantom positions sum to the budget; because at most one position changes
per step, the sum of medians climbs by at most one per step and cannot skip
the budget.

A schedule is built from a fractional phantom system and a rounding
function: whenever the rounded value of some fractional phantom k changes,
the integral phantoms (k, 1), ..., (k, m) take one step each, in order of
alternative; simultaneous changes are serviced in increasing k.  The floor
rounding of the upper-quota-capped IndependentMarkets system and of the
Utilitarian system give the two named mechanisms of interest.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

from .core import (
    IntegralAllocation,
    IntegralProfile,
    ceil_frac,
)
from .errors import InvalidInputError, InvalidScheduleError
from .phantoms import (
    PhantomSystem,
    PiecewisePhantom,
    independent_markets,
    upper_quota_cap,
    utilitarian,
)


@dataclass(frozen=True)
class RoundingRule:
    """Threshold rounding: values whose fractional part exceeds the
    threshold round up, all others round down.

    Threshold 1 is the floor function, threshold 0 the ceiling function.
    Monotonicity and the up-interval property (everything between a
    rounded-up value and its ceiling also rounds up) hold by construction.
    """

    threshold: Fraction

    def __post_init__(self):
        t = Fraction(self.threshold)
        object.__setattr__(self, "threshold", t)
        if not 0 <= t <= 1:
            raise InvalidInputError(f"rounding threshold {t} outside [0, 1]")

    def apply(self, x) -> int:
        x = Fraction(x)
        fl = math.floor(x)
        return fl + 1 if x - fl > self.threshold else fl


FLOOR = RoundingRule(Fraction(1))
CEILING = RoundingRule(Fraction(0))


@dataclass(frozen=True)
class PhantomSchedule:
    """Event list of unit moves (k, j) realizing an integral phantom system.

    Position of phantom (k, j) after step tau is the number of (k, j)
    events among the first tau.  Validation enforces the horizon bound, the
    per-position budget cap, and the final-position lower bound
    ``ceil(b * (n - k) / n)`` that guarantees normalization.
    """

    n: int
    m: int
    b: int
    events: tuple[tuple[int, int], ...]

    def __post_init__(self):
        counts = {}
        for k, j in self.events:
            if not (0 <= k <= self.n and 0 <= j < self.m):
                raise InvalidScheduleError(f"event ({k}, {j}) out of range")
            counts[(k, j)] = counts.get((k, j), 0) + 1
            if counts[(k, j)] > self.b:
                raise InvalidScheduleError(
                    f"phantom ({k}, {j}) would exceed the budget"
                )
        if len(self.events) > self.horizon:
            raise InvalidScheduleError(
                f"{len(self.events)} events exceed the horizon {self.horizon}"
            )
        for k in range(self.n + 1):
            need = ceil_frac(Fraction(self.b * (self.n - k), self.n))
            for j in range(self.m):
                if counts.get((k, j), 0) < need:
                    raise InvalidScheduleError(
                        f"phantom ({k}, {j}) ends at {counts.get((k, j), 0)}, "
                        f"needs at least {need}"
                    )

    @property
    def horizon(self) -> int:
        return self.b * self.m * (self.n + 1)

    def positions_at(self, tau: int) -> list[list[int]]:
        """Positions of all phantoms after ``tau`` steps, indexed [k][j]."""
        pos = [[0] * self.m for _ in range(self.n + 1)]
        for k, j in self.events[:tau]:
            pos[k][j] += 1
        return pos


def _first_time_at_least(ph: PiecewisePhantom, y: Fraction):
    """Earliest t with ph(t) >= y (y > 0)."""
    for (t0, v0), (t1, v1) in ph.segments():
        if v1 >= y:
            if v0 >= y:
                return t0
            return t0 + (y - v0) * (t1 - t0) / (v1 - v0)
    return None


def _last_time_at_most(ph: PiecewisePhantom, c: Fraction):
    """Latest t with ph(t) <= c, i.e. the left endpoint of {ph > c}."""
    result = Fraction(0)
    for (t0, v0), (t1, v1) in ph.segments():
        if v1 <= c:
            result = t1
            continue
        if v0 <= c:
            result = t0 + (c - v0) * (t1 - t0) / (v1 - v0)
        break
    return result


def change_times(ph: PiecewisePhantom, rule: RoundingRule) -> list[tuple[Fraction, int]]:
    """Times at which the rounded phantom value reaches each new integer.

    For every value v = 1..rounded(ph(1)) the change time is the left
    endpoint of the set of times whose rounded value is at least v; with a
    closed threshold (floor) that set is closed, otherwise it is open and
    the infimum is the last time the phantom sits at the threshold.
    """
    final = rule.apply(ph.final_value)
    out = []
    for v in range(1, final + 1):
        if rule.threshold == 1:
            t = _first_time_at_least(ph, Fraction(v))
        else:
            t = _last_time_at_most(ph, Fraction(v - 1) + rule.threshold)
        out.append((t, v))
    return out


def build_schedule(system: PhantomSystem, rule: RoundingRule, m: int) -> PhantomSchedule:
    """Discretize a fractional phantom system into a unit-move schedule.

    Change times of all rounded phantoms are gathered and serviced in time
    order; at equal times lower phantom indices go first, and each change
    advances the phantoms of all ``m`` alternatives one after another in
    index order.
    """
    if m < 2:
        raise InvalidInputError(f"need at least two alternatives, got m={m}")
    changes = []
    for k, ph in enumerate(system.phantoms):
        for t, v in change_times(ph, rule):
            changes.append((t, k, v))
    changes.sort()
    events = [(k, j) for (_, k, _) in changes for j in range(m)]
    return PhantomSchedule(system.n, m, system.b, tuple(events))


@dataclass(frozen=True)
class IntegralEvaluation:
    """First normalization step together with the median vector there."""

    tau_star: int
    allocation: IntegralAllocation


def _column_median(column: list[int]) -> int:
    ordered = sorted(column)
    return ordered[len(ordered) // 2]


def _walk_normalizations(profile: IntegralProfile, schedule: PhantomSchedule):
    """Yield (tau, medians) at every step where the medians sum to b."""
    inst = profile.instance
    if (schedule.n, schedule.m, schedule.b) != (inst.n, inst.m, inst.b):
        raise InvalidInputError(
            f"schedule is for (n={schedule.n}, m={schedule.m}, b={schedule.b}), "
            f"profile has (n={inst.n}, m={inst.m}, b={inst.b})"
        )
    votes_by_alt = [
        [vote.amounts[j] for vote in profile.votes] for j in range(inst.m)
    ]
    positions = [[0] * inst.m for _ in range(inst.n + 1)]
    medians = [
        _column_median(votes_by_alt[j] + [0] * (inst.n + 1)) for j in range(inst.m)
    ]
    total = sum(medians)
    if total == inst.b:
        yield 0, tuple(medians)
    for tau, (k, j) in enumerate(schedule.events, start=1):
        positions[k][j] += 1
        before = medians[j]
        medians[j] = _column_median(
            votes_by_alt[j] + [positions[kk][j] for kk in range(inst.n + 1)]
        )
        if medians[j] - before > 1:
            raise InvalidScheduleError(
                f"median jumped by more than one at step {tau}"
            )
        total += medians[j] - before
        if total == inst.b:
            yield tau, tuple(medians)


def evaluate_integral(profile: IntegralProfile, schedule: PhantomSchedule) -> IntegralEvaluation:
    """Step the schedule until the medians sum to the budget.

    The normalization step always exists for a valid schedule, and the
    median vector is the same at every normalization step.
    """
    for tau, medians in _walk_normalizations(profile, schedule):
        return IntegralEvaluation(tau, IntegralAllocation(medians))
    raise InvalidScheduleError("schedule never normalizes on this profile")


@lru_cache(maxsize=None)
def _schedule(kind: str, n: int, m: int, b: int) -> PhantomSchedule:
    if kind == "floor-im":
        return build_schedule(upper_quota_cap(independent_markets(n, b)), FLOOR, m)
    if kind == "floor-util":
        return build_schedule(utilitarian(n, b), FLOOR, m)
    if kind == "ceil-im":
        return build_schedule(upper_quota_cap(independent_markets(n, b)), CEILING, m)
    if kind == "ceil-util":
        return build_schedule(utilitarian(n, b), CEILING, m)
    raise InvalidInputError(f"unknown schedule kind {kind!r}")


def _run(kind: str, profile: IntegralProfile) -> IntegralAllocation:
    inst = profile.instance
    return evaluate_integral(profile, _schedule(kind, inst.n, inst.m, inst.b)).allocation


def floor_im(profile: IntegralProfile) -> IntegralAllocation:
    """Floor rounding of the upper-quota-capped IndependentMarkets system.

    Truthful, and single-minded quota-proportional: on single-minded
    profiles every output amount is the floor or ceiling of the average.
    """
    return _run("floor-im", profile)


def floor_util(profile: IntegralProfile) -> IntegralAllocation:
    """Floor rounding of the Utilitarian system.

    Equivalent to composing Utilitarian with largest-remainder rounding
    under index tie-breaking.
    """
    return _run("floor-util", profile)


def ceil_im(profile: IntegralProfile) -> IntegralAllocation:
    """Ceiling rounding of the upper-quota-capped IndependentMarkets system.

    Truthful but not quota-proportional; provided as the negative example.
    """
    return _run("ceil-im", profile)


def ceil_util(profile: IntegralProfile) -> IntegralAllocation:
    """Ceiling rounding of the Utilitarian system."""
    return _run("ceil-util", profile)
