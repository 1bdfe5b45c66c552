"""Maximal {CNOT, Rz} block extraction and optimal block resynthesis.

Block discovery is a single scan over the gate list.  Each qubit points at
its open block; a CNOT or Rz joins (and may merge) the open blocks on its
qubits, while an opaque gate seals every open block it touches -- a sealed
block accepts no further gates, which guarantees that emitting each block
contiguously at the position of its last gate only ever commutes gates
across qubit-disjoint neighbors.
"""
from __future__ import annotations

from dataclasses import dataclass, replace
from typing import Callable, Sequence

from .encoder import Mode
from .ir import (
    Circuit,
    Cnot,
    CouplingMap,
    Gate,
    Opaque,
    PhasePolyRep,
    Rz,
    cnot_count,
    cnot_depth,
    gate_qubits,
    induced_coupling,
)
from .phasepoly import extract_rep
from .sat.solver import SolverTimeout
from .synthesizer import (
    NoSolutionWithinKmax,
    SynthesisRequest,
    SynthesisTimeout,
    hopps,
)


@dataclass(frozen=True)
class Block:
    """A {CNOT, Rz} subcircuit, relabeled onto local qubit indices."""

    qubits: tuple[int, ...]          # physical qubits in first-touch order
    gates: tuple[Gate, ...]          # local-index gates
    span: tuple[int, ...]            # positions in the parent circuit
    rep: PhasePolyRep                # extracted locally from identity
    status: str = "original"

    @property
    def circuit(self) -> Circuit:
        return Circuit(len(self.qubits), self.gates)


def _scan_blocks(circuit: Circuit, max_qubits: int | None = None,
                 max_depth: int | None = None,
                 flush_at: int | None = None) -> list[tuple[list[int], list[int]]]:
    """Greedy scan-line grouping; returns (qubit set, gate indices) per block.

    ``max_qubits``/``max_depth`` seal an open block instead of letting a
    gate grow it past the cap; ``flush_at`` seals everything open before
    the given position (used for offset-randomized partitioning).
    """
    open_of: dict[int, int] = {}
    qubits_of: dict[int, set[int]] = {}
    indices_of: dict[int, list[int]] = {}
    layer_of: dict[int, dict[int, int]] = {}
    depth_of: dict[int, int] = {}
    sealed: list[int] = []
    next_id = 0

    def seal(block_id: int) -> None:
        for q in qubits_of[block_id]:
            if open_of.get(q) == block_id:
                del open_of[q]
        sealed.append(block_id)

    def open_new(qs: Sequence[int], index: int, gate: Gate) -> None:
        nonlocal next_id
        bid = next_id
        next_id += 1
        qubits_of[bid] = set(qs)
        indices_of[bid] = [index]
        layer_of[bid] = {}
        depth_of[bid] = 0
        _track_depth(bid, gate)
        for q in qs:
            open_of[q] = bid

    def _track_depth(bid: int, gate: Gate) -> None:
        if isinstance(gate, Cnot):
            lm = layer_of[bid]
            lv = 1 + max(lm.get(gate.control, 0), lm.get(gate.target, 0))
            lm[gate.control] = lm[gate.target] = lv
            if lv > depth_of[bid]:
                depth_of[bid] = lv

    for index, gate in enumerate(circuit.gates):
        if flush_at is not None and index == flush_at:
            for bid in list(dict.fromkeys(open_of.values())):
                seal(bid)
        qs = gate_qubits(gate)
        if isinstance(gate, Opaque):
            for bid in list(dict.fromkeys(open_of.get(q) for q in qs)):
                if bid is not None:
                    seal(bid)
            continue

        cands = list(dict.fromkeys(open_of[q] for q in qs if q in open_of))
        if not cands:
            open_new(qs, index, gate)
            continue

        union_qubits = set(qs)
        for bid in cands:
            union_qubits |= qubits_of[bid]
        merged_depth = max(depth_of[bid] for bid in cands)
        if isinstance(gate, Cnot):
            lv = 1 + max(max((layer_of[bid].get(q, 0) for bid in cands), default=0)
                         for q in qs)
            merged_depth = max(merged_depth, lv)
        if (max_qubits is not None and len(union_qubits) > max_qubits) or \
           (max_depth is not None and merged_depth > max_depth):
            for bid in cands:
                seal(bid)
            open_new(qs, index, gate)
            continue

        home = cands[0]
        for bid in cands[1:]:
            qubits_of[home] |= qubits_of[bid]
            indices_of[home].extend(indices_of[bid])
            layer_of[home].update(layer_of[bid])
            depth_of[home] = max(depth_of[home], depth_of[bid])
            del qubits_of[bid], indices_of[bid], layer_of[bid], depth_of[bid]
        qubits_of[home] |= set(qs)
        indices_of[home].append(index)
        _track_depth(home, gate)
        for q in qubits_of[home]:
            open_of[q] = home

    emitted = sealed + list(dict.fromkeys(open_of.values()))
    out = []
    for bid in emitted:
        indices = sorted(indices_of[bid])
        out.append((sorted(qubits_of[bid]), indices))
    out.sort(key=lambda pair: pair[1][-1])
    return out


def _make_block(circuit: Circuit, indices: list[int]) -> Block:
    qubit_order: list[int] = []
    for i in indices:
        for q in gate_qubits(circuit.gates[i]):
            if q not in qubit_order:
                qubit_order.append(q)
    local = {q: j for j, q in enumerate(qubit_order)}
    gates: list[Gate] = []
    for i in indices:
        g = circuit.gates[i]
        if isinstance(g, Cnot):
            gates.append(Cnot(local[g.control], local[g.target]))
        elif isinstance(g, Rz):
            gates.append(Rz(g.angle, local[g.qubit]))
        else:  # pragma: no cover - scan never places opaque gates in blocks
            raise ValueError("opaque gate inside a block")
    block_circuit = Circuit(len(qubit_order), tuple(gates))
    return Block(tuple(qubit_order), tuple(gates), tuple(indices),
                 extract_rep(block_circuit))


def find_blocks(circuit: Circuit) -> list[Block]:
    """Maximal disjoint {CNOT, Rz} blocks in dependency-preserving order."""
    return [_make_block(circuit, indices) for _, indices in _scan_blocks(circuit)]


def block_to_physical(block: Block) -> list[Gate]:
    out: list[Gate] = []
    for g in block.gates:
        if isinstance(g, Cnot):
            out.append(Cnot(block.qubits[g.control], block.qubits[g.target]))
        elif isinstance(g, Rz):
            out.append(Rz(g.angle, block.qubits[g.qubit]))
        else:  # pragma: no cover
            raise ValueError("opaque gate inside a block")
    return out


def splice_blocks(circuit: Circuit, blocks: Sequence[Block]) -> Circuit:
    """Rebuild the parent circuit with each block emitted at its last position."""
    claimed: dict[int, tuple[Block, bool]] = {}
    for block in blocks:
        last = block.span[-1]
        for i in block.span:
            claimed[i] = (block, i == last)
    gates: list[Gate] = []
    for i, g in enumerate(circuit.gates):
        if i in claimed:
            block, emit_here = claimed[i]
            if emit_here:
                gates.extend(block_to_physical(block))
        else:
            gates.append(g)
    return Circuit(circuit.num_qubits, tuple(gates))


def _metrics(gates: Sequence[Gate], n: int) -> tuple[int, int]:
    c = Circuit(n, tuple(gates))
    return cnot_count(c), cnot_depth(c)


def _accepts(mode: Mode, old: tuple[int, int], new: tuple[int, int]) -> bool:
    """Strict improvement on the target metric, or a tie that does not
    worsen the other metric."""
    if mode is Mode.CNOT:
        old_t, old_o = old
        new_t, new_o = new
    else:
        old_o, old_t = old
        new_o, new_t = new
    return new_t < old_t or (new_t == old_t and new_o <= old_o)


def resynth_block(block: Block, cm: CouplingMap, mode: Mode = Mode.CNOT,
                  doubly: bool = True, timeout_s: float = 600.0,
                  backend: str | None = None) -> Block:
    """Optimal resynthesis of one block on its induced topology.

    Falls back to the original block (flagged in ``status``) when the
    induced topology is disconnected or the solve does not finish.
    """
    local_map = induced_coupling(cm, block.qubits)
    if len(block.qubits) >= 2 and not local_map.is_connected():
        return replace(block, status="skipped_disconnected")
    try:
        result = hopps(SynthesisRequest(block.rep, local_map, mode=mode, doubly=doubly,
                                        timeout_s=timeout_s, backend=backend))
    except (SynthesisTimeout, SolverTimeout, NoSolutionWithinKmax):
        return replace(block, status="failed_budget")
    old = _metrics(block.gates, len(block.qubits))
    new = (result.cnot_count, result.cnot_depth)
    if not _accepts(mode, old, new):
        return replace(block, status="kept_original")
    return Block(block.qubits, result.circuit.gates, block.span,
                 extract_rep(result.circuit), status="resynthesized")


def peephole_pass(circuit: Circuit, cm: CouplingMap, mode: Mode = Mode.CNOT,
                  doubly: bool = True, timeout_s: float = 600.0,
                  backend: str | None = None,
                  worker: Callable[[Block], Block] | None = None) -> Circuit:
    """Resynthesize every block independently and splice the results back."""
    new_circuit, _ = peephole_with_report(circuit, cm, mode, doubly, timeout_s,
                                          backend, worker)
    return new_circuit


def peephole_with_report(circuit: Circuit, cm: CouplingMap, mode: Mode = Mode.CNOT,
                         doubly: bool = True, timeout_s: float = 600.0,
                         backend: str | None = None,
                         worker: Callable[[Block], Block] | None = None,
                         ) -> tuple[Circuit, list[tuple[Block, Block]]]:
    if circuit.num_qubits != cm.num_qubits:
        raise ValueError("circuit and coupling map qubit counts differ")
    blocks = find_blocks(circuit)
    if worker is None:
        worker = lambda b: resynth_block(b, cm, mode, doubly, timeout_s, backend)
    replaced = [worker(b) for b in blocks]
    return splice_blocks(circuit, replaced), list(zip(blocks, replaced))


__all__ = [
    "Block", "find_blocks", "block_to_physical", "splice_blocks",
    "resynth_block", "peephole_pass", "peephole_with_report",
]
