#!/usr/bin/env python3
"""Minimal CDCL SAT solver for DIMACS CNF files.

A self-contained fallback for environments without a real SAT solver on the
PATH.  Implements watched literals with a dedicated binary-implication
store, first-UIP clause learning, VSIDS-style activities with phase saving,
and Luby restarts.  Prints SAT-competition style output:

    s SATISFIABLE / s UNSATISFIABLE
    v <model literals> 0

and exits with code 10 (satisfiable) or 20 (unsatisfiable).

Usage: solvesat.py FILE.cnf
"""

import sys
from heapq import heappush, heappop


def parse_dimacs(path):
    num_vars = 0
    clauses = []
    current = []
    with open(path, "r") as fh:
        for line in fh:
            if not line or line[0] in "cp%":
                if line.startswith("p"):
                    parts = line.split()
                    num_vars = int(parts[2])
                continue
            for tok in line.split():
                lit = int(tok)
                if lit == 0:
                    clauses.append(current)
                    current = []
                else:
                    current.append(lit)
    if current:
        clauses.append(current)
    return num_vars, clauses


class Solver:
    def __init__(self, num_vars):
        self.nv = num_vars
        size = 2 * num_vars + 2
        self.bin_imp = [[] for _ in range(size)]   # keyed by the true literal
        self.watches = [[] for _ in range(size)]   # keyed by the falsified literal
        self.clauses = []                          # long clauses (len >= 3)
        self.assigns = [0] * (num_vars + 1)        # 0 unknown, 1 true, -1 false
        self.level = [0] * (num_vars + 1)
        self.reason_cl = [-1] * (num_vars + 1)
        self.reason_bin = [-1] * (num_vars + 1)
        self.trail = []
        self.lim = []                              # trail length per decision level
        self.qhead = 0
        self.act = [0.0] * (num_vars + 1)
        self.var_inc = 1.0
        self.heap = []
        self.phase = [1] * (num_vars + 1)          # saved polarity, 1 = negative
        self.n_learned_long = 0
        self.ok = True
        for v in range(1, num_vars + 1):
            heappush(self.heap, (0.0, v))

    # literal encoding: var v -> 2v (positive), 2v + 1 (negative)

    def lit_value(self, lit):
        return self.assigns[lit >> 1] * (1 - ((lit & 1) << 1))

    def add_clause(self, lits_dimacs):
        seen = set()
        lits = []
        for ld in lits_dimacs:
            enc = (abs(ld) << 1) | (ld < 0)
            if enc ^ 1 in seen:
                return  # tautology
            if enc not in seen:
                seen.add(enc)
                lits.append(enc)
        if not lits:
            self.ok = False
            return
        if len(lits) == 1:
            val = self.lit_value(lits[0])
            if val == -1:
                self.ok = False
            elif val == 0:
                self.enqueue(lits[0], -1, -1)
            return
        if len(lits) == 2:
            a, b = lits
            self.bin_imp[a ^ 1].append(b)
            self.bin_imp[b ^ 1].append(a)
            return
        ci = len(self.clauses)
        self.clauses.append(lits)
        self.watches[lits[0]].append(ci)
        self.watches[lits[1]].append(ci)

    def enqueue(self, lit, reason_cl, reason_bin):
        v = lit >> 1
        self.assigns[v] = 1 - ((lit & 1) << 1)
        self.level[v] = len(self.lim)
        self.reason_cl[v] = reason_cl
        self.reason_bin[v] = reason_bin
        self.trail.append(lit)

    def propagate(self):
        """Return a conflict clause (list of literals) or None."""
        assigns = self.assigns
        watches = self.watches
        clauses = self.clauses
        while self.qhead < len(self.trail):
            p = self.trail[self.qhead]
            self.qhead += 1
            for q in self.bin_imp[p]:
                val = assigns[q >> 1] * (1 - ((q & 1) << 1))
                if val == -1:
                    return [q, p ^ 1]
                if val == 0:
                    self.enqueue(q, -1, p ^ 1)
            falsified = p ^ 1
            ws = watches[falsified]
            i = j = 0
            n = len(ws)
            conflict = None
            while i < n:
                ci = ws[i]
                i += 1
                cl = clauses[ci]
                if cl[0] == falsified:
                    cl[0], cl[1] = cl[1], falsified
                first = cl[0]
                if assigns[first >> 1] * (1 - ((first & 1) << 1)) == 1:
                    ws[j] = ci
                    j += 1
                    continue
                for k in range(2, len(cl)):
                    lk = cl[k]
                    if assigns[lk >> 1] * (1 - ((lk & 1) << 1)) != -1:
                        cl[1], cl[k] = lk, falsified
                        watches[lk].append(ci)
                        break
                else:
                    ws[j] = ci
                    j += 1
                    if assigns[first >> 1] * (1 - ((first & 1) << 1)) == -1:
                        while i < n:
                            ws[j] = ws[i]
                            j += 1
                            i += 1
                        conflict = cl
                        break
                    self.enqueue(first, ci, -1)
            del ws[j:]
            if conflict is not None:
                return conflict
        return None

    def bump(self, v):
        self.act[v] += self.var_inc
        if self.act[v] > 1e100:
            scale = 1e-100
            for u in range(1, self.nv + 1):
                self.act[u] *= scale
            self.var_inc *= scale
        if self.assigns[v] == 0:
            heappush(self.heap, (-self.act[v], v))

    def reason_lits(self, v):
        if self.reason_cl[v] >= 0:
            return self.clauses[self.reason_cl[v]]
        lit = 2 * v if self.assigns[v] == 1 else 2 * v + 1
        return [lit, self.reason_bin[v]]

    def analyze(self, conflict):
        """First-UIP learning; returns (learned literals, backjump level)."""
        seen = bytearray(self.nv + 1)
        learned = []
        counter = 0
        p = -1
        index = len(self.trail) - 1
        cur_level = len(self.lim)
        reason = conflict
        while True:
            for q in reason:
                if q == p:
                    continue
                v = q >> 1
                if not seen[v] and self.level[v] > 0:
                    seen[v] = 1
                    self.bump(v)
                    if self.level[v] >= cur_level:
                        counter += 1
                    else:
                        learned.append(q)
            while not seen[self.trail[index] >> 1]:
                index -= 1
            p = self.trail[index]
            v = p >> 1
            seen[v] = 0
            counter -= 1
            index -= 1
            if counter == 0:
                break
            reason = self.reason_lits(v)
        learned.insert(0, p ^ 1)
        back = 0
        if len(learned) > 1:
            back = max(self.level[q >> 1] for q in learned[1:])
        return learned, back

    def backtrack(self, target_level):
        if len(self.lim) <= target_level:
            return
        cut = self.lim[target_level]
        for lit in self.trail[cut:]:
            v = lit >> 1
            self.assigns[v] = 0
            self.phase[v] = lit & 1
            heappush(self.heap, (-self.act[v], v))
        del self.trail[cut:]
        del self.lim[target_level:]
        self.qhead = len(self.trail)

    def learn(self, lits):
        if len(lits) == 1:
            self.enqueue(lits[0], -1, -1)
            return
        if len(lits) == 2:
            a, b = lits
            self.bin_imp[a ^ 1].append(b)
            self.bin_imp[b ^ 1].append(a)
            self.enqueue(a, -1, b)
            return
        ci = len(self.clauses)
        self.clauses.append(lits)
        self.watches[lits[0]].append(ci)
        # watch the literal from the backjump level so the clause stays sane
        best = max(range(1, len(lits)), key=lambda k: self.level[lits[k] >> 1])
        lits[1], lits[best] = lits[best], lits[1]
        self.watches[lits[1]].append(ci)
        self.n_learned_long += 1
        self.enqueue(lits[0], ci, -1)

    def decide(self):
        while self.heap:
            _, v = heappop(self.heap)
            if self.assigns[v] == 0:
                self.lim.append(len(self.trail))
                self.enqueue(2 * v + self.phase[v], -1, -1)
                return True
        return False

    def solve(self):
        if not self.ok or self.propagate() is not None:
            return False
        conflicts_here = 0
        restart_idx = 1
        limit = 128 * _luby(restart_idx)
        while True:
            conflict = self.propagate()
            if conflict is not None:
                if not self.lim:
                    return False
                conflicts_here += 1
                self.var_inc /= 0.95
                learned, back = self.analyze(conflict)
                self.backtrack(back)
                self.learn(learned)
            else:
                if conflicts_here >= limit:
                    conflicts_here = 0
                    restart_idx += 1
                    limit = 128 * _luby(restart_idx)
                    self.backtrack(0)
                if not self.decide():
                    return True


def _luby(i):
    while True:
        k = 1
        while (1 << k) - 1 < i:
            k += 1
        if (1 << k) - 1 == i:
            return 1 << (k - 1)
        i -= (1 << (k - 1)) - 1


def main():
    if len(sys.argv) != 2:
        print("usage: solvesat.py FILE.cnf", file=sys.stderr)
        return 2
    num_vars, clause_list = parse_dimacs(sys.argv[1])
    solver = Solver(num_vars)
    for cl in clause_list:
        if not solver.ok:
            break
        solver.add_clause(cl)
    if solver.ok and solver.propagate() is not None:
        solver.ok = False
    if solver.ok and solver.solve():
        model = []
        for v in range(1, num_vars + 1):
            model.append(v if solver.assigns[v] >= 0 else -v)
        print("s SATISFIABLE")
        chunk = 20
        for i in range(0, len(model), chunk):
            tail = " 0" if i + chunk >= len(model) else ""
            print("v " + " ".join(map(str, model[i:i + chunk])) + tail)
        if not model:
            print("v 0")
        return 10
    print("s UNSATISFIABLE")
    return 20


if __name__ == "__main__":
    sys.exit(main())
