"""CNF encoding of "an anonymous, truthful, JR mechanism exists".

For a fixed instance size, one boolean variable is created per pair of a
canonical profile (the lexicographically smallest reordering of its votes,
which is what anonymity leaves of a profile) and an allocation satisfying
justified representation for it.  Exactly-one clauses make the assignment a
function, and a binary clause forbids every pair of outputs that a single
voter's misreport would turn into a profitable deviation.  A satisfying
assignment is a mechanism table; unsatisfiability proves the impossibility
for that instance size.

The solver is external and pluggable: this module emits DIMACS bytes,
invokes a caller-supplied command on the file, and parses SAT-competition
style output ("s SATISFIABLE" / "s UNSATISFIABLE" and "v" model lines).
Variable and clause order is a pure function of the instance, so emitted
files are byte-stable.
"""

from __future__ import annotations

import shlex
import subprocess
from bisect import bisect_left
from dataclasses import dataclass, field
from itertools import combinations, combinations_with_replacement, product

from .core import (
    Instance,
    IntegralAllocation,
    IntegralProfile,
    amount_vectors,
    canonicalize,
    l1_disutility,
)
from .errors import InconsistentModelError, InvalidInputError

ALL_AXIOMS = frozenset({"anonymous", "truthful", "jr"})


@dataclass(frozen=True)
class VarMap:
    """Bidirectional numbering of (profile, allocation) pairs.

    Variables are 1-based and contiguous; profile blocks follow the
    lexicographic profile order and allocations within a block follow the
    lexicographic allocation order.
    """

    n: int
    m: int
    b: int
    votes: tuple[tuple[int, ...], ...]
    profiles: tuple[tuple[int, ...], ...]
    choices: tuple[tuple[int, ...], ...]
    blocks: tuple[int, ...]

    @property
    def num_vars(self) -> int:
        return self.blocks[-1] - 1 if self.blocks else 0

    def profile_of(self, pid: int) -> IntegralProfile:
        inst = Instance(self.n, self.m, self.b)
        return IntegralProfile(
            inst, tuple(IntegralAllocation(self.votes[v]) for v in self.profiles[pid])
        )

    def allocation_of(self, aid: int) -> IntegralAllocation:
        return IntegralAllocation(self.votes[aid])

    def var_id(self, profile: IntegralProfile, allocation: IntegralAllocation) -> int:
        vote_index = {v: i for i, v in enumerate(self.votes)}
        ids = tuple(sorted(vote_index[v.amounts] for v in profile.votes))
        pid = self._pid(ids)
        aid = vote_index[allocation.amounts]
        pos = self.choices[pid].index(aid)
        return self.blocks[pid] + pos

    def pair_for(self, var: int) -> tuple[IntegralProfile, IntegralAllocation]:
        if not 1 <= var <= self.num_vars:
            raise InvalidInputError(f"variable {var} out of range")
        pid = bisect_left(self.blocks, var + 1) - 1
        aid = self.choices[pid][var - self.blocks[pid]]
        return self.profile_of(pid), self.allocation_of(aid)

    def _pid(self, ids: tuple[int, ...]) -> int:
        lookup = getattr(self, "_pid_cache", None)
        if lookup is None:
            lookup = {p: i for i, p in enumerate(self.profiles)}
            object.__setattr__(self, "_pid_cache", lookup)
        return lookup[ids]


@dataclass
class CnfStats:
    at_least_one: int = 0
    at_most_one: int = 0
    truthfulness: int = 0
    empty_at_least_one: int = 0


@dataclass
class CnfInstance:
    num_vars: int
    clauses: list[tuple[int, ...]]
    stats: CnfStats = field(default_factory=CnfStats)


def enumerate_canonical_profiles(n: int, m: int, b: int) -> list[IntegralProfile]:
    """One representative (the lexicographically smallest reordering) per
    anonymity orbit, in lexicographic order."""
    inst = Instance(n, m, b)
    votes = tuple(amount_vectors(m, b))
    return [
        IntegralProfile(inst, tuple(IntegralAllocation(votes[v]) for v in ids))
        for ids in combinations_with_replacement(range(len(votes)), n)
    ]


def _support_mask(vec: tuple[int, ...]) -> int:
    mask = 0
    for j, x in enumerate(vec):
        if x > 0:
            mask |= 1 << j
    return mask


def _jr_allocation_ids(profile_ids, votes, support, n, m, b) -> tuple[int, ...]:
    out = []
    for aid in range(len(votes)):
        a_mask = support[aid]
        unrep = [vid for vid in profile_ids if not support[vid] & a_mask]
        ok = True
        if unrep:
            for j in range(m):
                bit = 1 << j
                if sum(1 for vid in unrep if support[vid] & bit) * b >= n:
                    ok = False
                    break
        if ok:
            out.append(aid)
    return tuple(out)


def encode(n: int, m: int, b: int,
           axioms: frozenset[str] = ALL_AXIOMS) -> tuple[CnfInstance, VarMap]:
    """Build the CNF for the given instance size and axiom selection.

    Dropping "anonymous" keeps one variable block per raw profile instead of
    per orbit; dropping "jr" admits every allocation as a candidate output;
    dropping "truthful" omits the deviation clauses.  A profile without any
    admissible allocation produces an empty at-least-one clause (making the
    formula trivially unsatisfiable), counted in the stats.
    """
    unknown = set(axioms) - ALL_AXIOMS
    if unknown:
        raise InvalidInputError(f"unknown axioms: {sorted(unknown)}")
    Instance(n, m, b)
    votes = tuple(amount_vectors(m, b))
    support = [_support_mask(v) for v in votes]
    nvotes = len(votes)
    anonymous = "anonymous" in axioms

    if anonymous:
        profiles = tuple(combinations_with_replacement(range(nvotes), n))
    else:
        profiles = tuple(product(range(nvotes), repeat=n))
    pid_of = {p: i for i, p in enumerate(profiles)}

    if "jr" in axioms:
        choices = tuple(
            _jr_allocation_ids(p, votes, support, n, m, b) for p in profiles
        )
    else:
        everything = tuple(range(nvotes))
        choices = tuple(everything for _ in profiles)

    blocks = []
    nxt = 1
    for ch in choices:
        blocks.append(nxt)
        nxt += len(ch)
    blocks.append(nxt)
    num_vars = nxt - 1

    stats = CnfStats()
    clauses: list[tuple[int, ...]] = []

    for pid, ch in enumerate(choices):
        base = blocks[pid]
        clauses.append(tuple(base + pos for pos in range(len(ch))))
        stats.at_least_one += 1
        if not ch:
            stats.empty_at_least_one += 1
        for p1, p2 in combinations(range(len(ch)), 2):
            clauses.append((-(base + p1), -(base + p2)))
            stats.at_most_one += 1

    if "truthful" in axioms:
        dist = [
            [sum(abs(x - y) for x, y in zip(votes[v], votes[w])) for w in range(nvotes)]
            for v in range(nvotes)
        ]
        emitted: set[int] = set()
        span = num_vars + 1
        for pid, prof in enumerate(profiles):
            base1 = blocks[pid]
            gamma1 = choices[pid]
            deviations = _deviations(prof, nvotes, anonymous)
            for vid, star in deviations:
                pid2 = pid_of[star]
                if pid2 == pid:
                    continue
                base2 = blocks[pid2]
                gamma2 = choices[pid2]
                if not gamma1 or not gamma2:
                    continue
                row = dist[vid]
                order2 = sorted(range(len(gamma2)), key=lambda p: row[gamma2[p]])
                sorted_d2 = [row[gamma2[p]] for p in order2]
                for pos1, aid1 in enumerate(gamma1):
                    var1 = base1 + pos1
                    cut = bisect_left(sorted_d2, row[aid1])
                    for idx in range(cut):
                        var2 = base2 + order2[idx]
                        lo, hi = (var1, var2) if var1 < var2 else (var2, var1)
                        key = lo * span + hi
                        if key in emitted:
                            continue
                        emitted.add(key)
                        clauses.append((-var1, -var2))
                        stats.truthfulness += 1

    varmap = VarMap(n, m, b, votes, profiles, choices, tuple(blocks))
    return CnfInstance(num_vars, clauses, stats), varmap


def _deviations(prof, nvotes, anonymous):
    """Pairs (true vote id, resulting profile key) for single-voter misreports."""
    out = []
    if anonymous:
        for vid in sorted(set(prof)):
            rest = list(prof)
            rest.remove(vid)
            for w in range(nvotes):
                if w == vid:
                    continue
                out.append((vid, tuple(sorted(rest + [w]))))
    else:
        for i, vid in enumerate(prof):
            for w in range(nvotes):
                if w == vid:
                    continue
                out.append((vid, prof[:i] + (w,) + prof[i + 1:]))
    return out


def _format_vote(vec: tuple[int, ...]) -> str:
    return ",".join(str(x) for x in vec)


def emit_dimacs(cnf: CnfInstance, varmap: VarMap | None = None,
                comments: bool = False) -> bytes:
    """Serialize to DIMACS CNF; identical inputs give identical bytes.

    With ``comments`` (and a varmap), a comment line per variable records
    the profile and allocation it stands for.
    """
    lines: list[str] = []
    if comments and varmap is not None:
        for var in range(1, cnf.num_vars + 1):
            profile, allocation = varmap.pair_for(var)
            prof_s = " ".join(_format_vote(v.amounts) for v in profile.votes)
            lines.append(f"c var {var} = {prof_s}|{_format_vote(allocation.amounts)}")
    lines.append(f"p cnf {cnf.num_vars} {len(cnf.clauses)}")
    for clause in cnf.clauses:
        lines.append(" ".join(str(lit) for lit in clause) + " 0")
    return ("\n".join(lines) + "\n").encode("ascii")


class MechanismTable:
    """A total map from canonical profiles to allocations."""

    def __init__(self, n: int, m: int, b: int,
                 mapping: dict[IntegralProfile, IntegralAllocation]):
        self.n, self.m, self.b = n, m, b
        self.mapping = dict(mapping)

    def lookup(self, profile: IntegralProfile) -> IntegralAllocation:
        return self.mapping[canonicalize(profile)]

    def __len__(self):
        return len(self.mapping)


def decode_model(assignment, varmap: VarMap) -> MechanismTable:
    """Turn a satisfying assignment (iterable of literals) into a table.

    Every profile must have exactly one positive variable; anything else
    raises :class:`~budgetagg.errors.InconsistentModelError`.
    """
    true_vars = {lit for lit in assignment if lit > 0}
    mapping: dict[IntegralProfile, IntegralAllocation] = {}
    for pid in range(len(varmap.profiles)):
        base = varmap.blocks[pid]
        chosen = [
            pos for pos in range(len(varmap.choices[pid])) if base + pos in true_vars
        ]
        if len(chosen) != 1:
            raise InconsistentModelError(
                f"profile {pid} has {len(chosen)} selected allocations"
            )
        mapping[varmap.profile_of(pid)] = varmap.allocation_of(
            varmap.choices[pid][chosen[0]]
        )
    return MechanismTable(varmap.n, varmap.m, varmap.b, mapping)


@dataclass
class TableReport:
    """Independent re-check of a mechanism table.

    Anonymity holds by construction (the table is keyed by canonical
    profiles); JR membership and truthfulness are re-verified from scratch
    against the axioms module.
    """

    ok: bool
    jr_failures: list
    manipulations: list


def verify_table(table: MechanismTable) -> TableReport:
    from .axioms import ManipulationWitness, check_jr
    from .core import integral_allocations

    jr_failures = []
    manipulations = []
    reports = tuple(integral_allocations(table.m, table.b))
    for profile, out in table.mapping.items():
        violation = check_jr(profile, out)
        if violation is not None:
            jr_failures.append((profile, out, violation))
        for i, truthful in enumerate(profile.votes):
            honest_loss = l1_disutility(truthful, out)
            for report in reports:
                if report == truthful:
                    continue
                deviant = table.lookup(profile.replace_vote(i, report))
                gain = honest_loss - l1_disutility(truthful, deviant)
                if gain > 0:
                    manipulations.append(
                        ManipulationWitness(profile, i, report, out, deviant, gain)
                    )
    return TableReport(
        ok=not jr_failures and not manipulations,
        jr_failures=jr_failures,
        manipulations=manipulations,
    )


@dataclass
class SolverResult:
    status: str  # "SAT", "UNSAT", or "UNKNOWN"
    model: list[int]


def run_solver(command: str, dimacs_path) -> SolverResult:
    """Invoke ``command <dimacs_path>`` and parse SAT-competition output.

    Falls back to the conventional exit codes (10 satisfiable, 20
    unsatisfiable) when no "s" line is printed.
    """
    argv = shlex.split(command) + [str(dimacs_path)]
    proc = subprocess.run(argv, capture_output=True, text=True)
    status = "UNKNOWN"
    model: list[int] = []
    for line in proc.stdout.splitlines():
        if line.startswith("s "):
            verdict = line[2:].strip()
            if verdict == "SATISFIABLE":
                status = "SAT"
            elif verdict == "UNSATISFIABLE":
                status = "UNSAT"
        elif line.startswith("v "):
            model.extend(
                int(tok) for tok in line[2:].split() if tok and tok != "0"
            )
    if status == "UNKNOWN":
        if proc.returncode == 10:
            status = "SAT"
        elif proc.returncode == 20:
            status = "UNSAT"
    return SolverResult(status, model)
