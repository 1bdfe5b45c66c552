#!/usr/bin/env python3
"""Self-contained DIMACS CNF solver for differential testing.

Small instances (<= 20 variables) are checked by exhaustive truth-table
enumeration with big-int bit columns; larger ones fall back to a plain
recursive DPLL with clause-scanning unit propagation.  Neither path shares
code with the package's watched-literal solver.  Prints SAT-competition
style output:

    s SATISFIABLE | s UNSATISFIABLE
    v <lit> ... 0

Exit codes: 10 SAT, 20 UNSAT.
"""
import sys

sys.setrecursionlimit(100000)

BRUTE_MAX_VARS = 20


def parse_dimacs(text):
    num_vars = None
    clauses = []
    pending = []
    for raw in text.splitlines():
        line = raw.strip()
        if not line or line.startswith("c"):
            continue
        if line.startswith("p"):
            parts = line.split()
            num_vars = int(parts[2])
            continue
        pending.extend(line.split())
        while "0" in pending:
            cut = pending.index("0")
            clauses.append([int(tok) for tok in pending[:cut]])
            pending = pending[cut + 1:]
    if num_vars is None:
        raise ValueError("missing DIMACS header")
    return num_vars, clauses


def solve_brute(num_vars, clauses):
    size = 1 << num_vars
    ones = (1 << size) - 1
    cols = [0]
    for v in range(1, num_vars + 1):
        block = 1 << (v - 1)
        cols.append((ones // ((1 << block) + 1)) << block)
    mask = ones
    for clause in clauses:
        cm = 0
        for lit in clause:
            cm |= cols[lit] if lit > 0 else (~cols[-lit] & ones)
            if cm == ones:
                break
        mask &= cm
        if mask == 0:
            return None
    a = (mask & -mask).bit_length() - 1
    return {v: bool((a >> (v - 1)) & 1) for v in range(1, num_vars + 1)}


def solve_dpll(num_vars, clauses):
    def simplify(clauses, lit):
        out = []
        for c in clauses:
            if lit in c:
                continue
            reduced = [l for l in c if l != -lit]
            if not reduced:
                return None
            out.append(reduced)
        return out

    def search(clauses, assignment):
        while True:
            unit = next((c[0] for c in clauses if len(c) == 1), None)
            if unit is None:
                break
            assignment[abs(unit)] = unit > 0
            clauses = simplify(clauses, unit)
            if clauses is None:
                return None
        if not clauses:
            return assignment
        lit = min(abs(l) for c in clauses for l in c)
        for choice in (-lit, lit):
            reduced = simplify(clauses, choice)
            if reduced is not None:
                trial = dict(assignment)
                trial[abs(choice)] = choice > 0
                result = search(reduced, trial)
                if result is not None:
                    return result
        return None

    result = search([list(c) for c in clauses], {})
    if result is None:
        return None
    return {v: result.get(v, False) for v in range(1, num_vars + 1)}


def main():
    if len(sys.argv) != 2:
        print("usage: ref_solver.py FILE.cnf", file=sys.stderr)
        return 2
    with open(sys.argv[1]) as fh:
        num_vars, clauses = parse_dimacs(fh.read())
    if num_vars <= BRUTE_MAX_VARS:
        model = solve_brute(num_vars, clauses)
    else:
        model = solve_dpll(num_vars, clauses)
    if model is None:
        print("s UNSATISFIABLE")
        return 20
    print("s SATISFIABLE")
    lits = [(v if model[v] else -v) for v in sorted(model)]
    for i in range(0, len(lits), 12):
        chunk = lits[i:i + 12]
        tail = " 0" if i + 12 >= len(lits) else ""
        print("v " + " ".join(str(x) for x in chunk) + tail)
    if not lits:
        print("v 0")
    return 10


if __name__ == "__main__":
    sys.exit(main())
