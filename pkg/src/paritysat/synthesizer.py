"""Incremental SAT search for optimal and doubly optimal circuits.

Phase 1 grows the step budget from a lower bound until the first
satisfiable encoding; that budget is the optimal primary metric (count in
count mode, depth in depth mode).  Phase 2, when requested, fixes the
primary optimum and descends on the secondary metric by monotonically
adding constraints to the same instance: a layer assignment plus
shrinking depth limits in count mode, or shrinking CNOT budgets in depth
mode.  The last satisfiable model wins.
"""
from __future__ import annotations

from dataclasses import dataclass, field

from .encoder import (
    EncodingConfig,
    Mode,
    VarLayout,
    add_cnot_budget,
    add_cnot_mode,
    add_depth_limit,
    add_depth_mode,
    add_layer_assignment,
    encode_common,
)
from .ir import (
    Circuit,
    Cnot,
    CouplingMap,
    ParityTable,
    PhasePolyRep,
    Rz,
    cnot_count,
    cnot_depth,
    induced_coupling,
)
from .phasepoly import merged_table
from .sat.core import SatInstance, export_dimacs
from .sat.solver import SatModel, SolverTimeout, solve_instance


class NoSolutionWithinKmax(RuntimeError):
    """Every step budget up to the ceiling was unsatisfiable."""


class SynthesisTimeout(RuntimeError):
    """Solve budget exhausted before any model was found."""


class InternalConsistencyError(RuntimeError):
    """Replayed parity disagrees with the model's parity variables."""


@dataclass
class SynthesisRequest:
    rep: PhasePolyRep
    coupling: CouplingMap
    mode: Mode = Mode.CNOT
    doubly: bool = False
    k_max: int | None = None
    timeout_s: float = 600.0
    backend: str | None = None
    dimacs_path: str | None = None


@dataclass
class SynthesisResult:
    circuit: Circuit
    cnot_count: int
    cnot_depth: int
    optimal: bool
    layers: list[list[tuple[int, int]]] | None = None
    stats: list[dict] = field(default_factory=list)

    @property
    def solve_time_s(self) -> float:
        return sum(entry.get("seconds", 0.0) for entry in self.stats)


def lower_bound(rep: PhasePolyRep, mode: Mode) -> int:
    """Cheap provable floor on the step budget.

    Count mode: each CNOT rewrites exactly one row to one new value, so
    every distinct term absent from the initial rows needs its own step.
    Depth mode: a single nonempty layer suffices as floor unless nothing
    needs to change at all.
    """
    initial_rows = set(rep.initial.rows)
    missing = {t for t in rep.table.terms if t not in initial_rows}
    if mode is Mode.CNOT:
        return len(missing)
    done = not missing and rep.initial.rows == rep.final.rows
    return 0 if done else 1


def default_k_max(n: int, num_terms: int) -> int:
    return 2 * n * n + num_terms * n


def _selected_steps(model: SatModel, layout: VarLayout) -> list[list[tuple[int, int]]]:
    edges = layout.cfg.directed_edges
    steps = []
    for step_vars in layout.cnot:
        steps.append([edges[e] for e, var in enumerate(step_vars) if model[var]])
    return steps


def _count_gates(model: SatModel, layout: VarLayout) -> int:
    return sum(1 for step_vars in layout.cnot for var in step_vars if model[var])


def _realized_depth(model: SatModel, layout: VarLayout) -> int:
    assert layout.gate_layer is not None
    top = -1
    for k, row in enumerate(layout.gate_layer):
        for l, var in enumerate(row):
            if model[var] and l > top:
                top = l
    return top + 1


def place_rotations(steps: list[list[tuple[int, int]]], rep: PhasePolyRep) -> Circuit:
    """Build the circuit: CNOT steps with each table entry's Rz inserted
    immediately after the earliest slice (then lowest row) matching its term."""
    n = rep.n
    rows = list(rep.initial.rows)
    slices = [tuple(rows)]
    for step in steps:
        for c, t in step:
            rows[t] ^= rows[c]
        slices.append(tuple(rows))

    slots: list[list[Rz]] = [[] for _ in range(len(slices))]
    for term, angle in zip(rep.table.terms, rep.table.angles):
        placed = False
        for k, state in enumerate(slices):
            for q in range(n):
                if state[q] == term:
                    slots[k].append(Rz(angle, q))
                    placed = True
                    break
            if placed:
                break
        if not placed:
            raise InternalConsistencyError(f"term {term:#x} never appears in any parity slice")

    gates = []
    for k, step in enumerate(steps):
        gates.extend(slots[k])
        gates.extend(Cnot(c, t) for c, t in step)
    gates.extend(slots[len(steps)])
    return Circuit(n, tuple(gates))


def decode_circuit(model: SatModel, layout: VarLayout, rep: PhasePolyRep) -> Circuit:
    """Read the gate sequence off a model, replay it, and place rotations.

    The replayed parity slices are checked bit-for-bit against the model's
    parity variables; a mismatch means the encoding is wrong, not the input.
    """
    steps = _selected_steps(model, layout)
    n = layout.cfg.num_qubits
    rows = list(rep.initial.rows)
    for k, step in enumerate(steps):
        for i in range(n):
            for j in range(n):
                if model[layout.parity[k][i][j]] != bool((rows[i] >> j) & 1):
                    raise InternalConsistencyError(f"parity mismatch at step {k}, row {i}")
        for c, t in step:
            rows[t] ^= rows[c]
    for i in range(n):
        for j in range(n):
            if model[layout.parity[len(steps)][i][j]] != bool((rows[i] >> j) & 1):
                raise InternalConsistencyError(f"parity mismatch at final step, row {i}")
    return place_rotations(steps, rep)


def _layered_steps(model: SatModel, layout: VarLayout) -> list[list[tuple[int, int]]]:
    """Group the count-mode gate sequence by its assigned layer labels."""
    assert layout.gate_layer is not None
    edges = layout.cfg.directed_edges
    by_label: dict[int, list[tuple[int, int]]] = {}
    for k, step_vars in enumerate(layout.cnot):
        gate = next(edges[e] for e, var in enumerate(step_vars) if model[var])
        label = next(l for l, var in enumerate(layout.gate_layer[k]) if model[var])
        by_label.setdefault(label, []).append(gate)
    return [by_label[l] for l in sorted(by_label)]


def hopps(req: SynthesisRequest) -> SynthesisResult:
    """Optimal (and optionally doubly optimal) hardware-aware synthesis."""
    rep = req.rep
    n = rep.n
    if req.coupling.num_qubits < n:
        raise ValueError("coupling map has fewer qubits than the representation")
    cm = req.coupling
    if cm.num_qubits > n:
        cm = induced_coupling(cm, range(n))
    if not cm.is_connected():
        raise ValueError("coupling map must be connected on the used qubits")

    table = merged_table(rep)
    unique_terms = list(dict.fromkeys(table.terms))
    decode_rep = PhasePolyRep(rep.initial, rep.final, table)
    bound_rep = PhasePolyRep(
        rep.initial, rep.final,
        ParityTable(n, tuple(unique_terms), tuple(0.0 for _ in unique_terms)))

    edges = cm.directed_edges()
    k_max = req.k_max if req.k_max is not None else default_k_max(n, len(unique_terms))
    k_top = k_max if edges else 0
    stats: list[dict] = []

    def timed_solve(inst: SatInstance, phase: str, k: int) -> SatModel | None:
        entry: dict = {"phase": phase, "k": k}
        model = solve_instance(inst, req.timeout_s, req.backend, stats_out=entry)
        entry["status"] = "sat" if model is not None else "unsat"
        stats.append(entry)
        return model

    def finish(model: SatModel, layout: VarLayout, inst: SatInstance,
               layers: list[list[tuple[int, int]]] | None, optimal: bool) -> SynthesisResult:
        if req.dimacs_path:
            with open(req.dimacs_path, "w") as fh:
                fh.write(export_dimacs(inst))
        circuit = decode_circuit(model, layout, decode_rep)
        return SynthesisResult(circuit, cnot_count(circuit), cnot_depth(circuit),
                               optimal, layers, stats)

    for k in range(lower_bound(bound_rep, req.mode), k_top + 1):
        cfg = EncodingConfig(req.mode, k, n, edges)
        inst, layout = encode_common(rep.initial, rep.final, unique_terms, cfg)
        if req.mode is Mode.CNOT:
            add_cnot_mode(inst, layout)
        else:
            add_depth_mode(inst, layout)
        try:
            model = timed_solve(inst, "primary", k)
        except SolverTimeout as exc:
            raise SynthesisTimeout(f"no model within {req.timeout_s} s at budget {k}") from exc
        if model is None:
            continue

        if not req.doubly or k == 0:
            layers = _selected_steps(model, layout) if req.mode is Mode.DEPTH else None
            if k == 0:
                layers = []
            return finish(model, layout, inst, layers, optimal=True)

        if req.mode is Mode.CNOT:
            add_layer_assignment(inst, layout)
            try:
                best = timed_solve(inst, "layering", k)
            except SolverTimeout:
                return finish(model, layout, inst, None, optimal=False)
            assert best is not None  # any gate sequence admits one-gate-per-layer
            depth = _realized_depth(best, layout)
            while depth > 1:
                add_depth_limit(inst, layout, depth - 1)
                try:
                    nxt = timed_solve(inst, "descent", depth - 1)
                except SolverTimeout:
                    return finish(best, layout, inst, _layered_steps(best, layout),
                                  optimal=False)
                if nxt is None:
                    break
                best = nxt
                depth = _realized_depth(best, layout)
            return finish(best, layout, inst, _layered_steps(best, layout), optimal=True)

        best = model
        count = _count_gates(best, layout)
        while count > 0:
            add_cnot_budget(inst, layout, count - 1)
            try:
                nxt = timed_solve(inst, "descent", count - 1)
            except SolverTimeout:
                return finish(best, layout, inst, _selected_steps(best, layout),
                              optimal=False)
            if nxt is None:
                break
            best = nxt
            count = _count_gates(best, layout)
        return finish(best, layout, inst, _selected_steps(best, layout), optimal=True)

    raise NoSolutionWithinKmax(f"no solution with step budget up to {k_top}")


__all__ = [
    "Mode", "SynthesisRequest", "SynthesisResult",
    "NoSolutionWithinKmax", "SynthesisTimeout", "InternalConsistencyError",
    "lower_bound", "default_k_max", "hopps", "decode_circuit", "place_rotations",
]
