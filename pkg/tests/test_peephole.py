import random

from paritysat.encoder import Mode
from paritysat.ir import (
    Circuit,
    Cnot,
    CouplingMap,
    Opaque,
    Rz,
    cnot_count,
    cnot_depth,
    validate_topology,
)
from paritysat.peephole import (
    find_blocks,
    peephole_pass,
    peephole_with_report,
    resynth_block,
    splice_blocks,
)
from paritysat.phasepoly import canonical_equal, canonicalize, equivalent

from conftest import random_cnot_rz_circuit, random_mixed_circuit


def test_pure_circuit_is_one_block():
    c = random_cnot_rz_circuit(random.Random(0), 4, 6, 3)
    blocks = find_blocks(c)
    assert len(blocks) == 1
    assert blocks[0].span == tuple(range(len(c.gates)))


def test_opaque_splits_blocks():
    c = Circuit(2, (Cnot(0, 1), Opaque("h", (1,)), Cnot(0, 1)))
    blocks = find_blocks(c)
    assert [b.span for b in blocks] == [(0,), (2,)]


def test_merged_then_split_preserves_semantics():
    c = Circuit(4, (Cnot(0, 1), Cnot(2, 3), Opaque("h", (3,)), Cnot(1, 2)))
    blocks = find_blocks(c)
    spliced = splice_blocks(c, blocks)
    # identity splice: same multiset of gates and identical per-qubit order,
    # so only qubit-disjoint gates were commuted past each other
    assert sorted(map(repr, spliced.gates)) == sorted(map(repr, c.gates))

    def on_qubit(gates, q):
        out = []
        for g in gates:
            if isinstance(g, Cnot):
                if q in (g.control, g.target):
                    out.append(g)
            elif isinstance(g, Rz):
                if q == g.qubit:
                    out.append(g)
            elif q in g.qubits:
                out.append(g)
        return out

    for q in range(4):
        assert on_qubit(spliced.gates, q) == on_qubit(c.gates, q)


def test_block_rep_extracted_locally():
    c = Circuit(4, (Cnot(2, 3), Rz(0.5, 3)))
    (block,) = find_blocks(c)
    assert block.qubits == (2, 3)
    assert block.rep.table.terms == (0b11,)


def test_resynth_removes_redundant_pair(line3):
    c = Circuit(3, (Cnot(0, 1), Cnot(0, 1), Rz(0.2, 2)))
    blocks = find_blocks(c)
    assert len(blocks) == 2  # the lone rotation on qubit 2 is its own block
    block = next(b for b in blocks if len(b.qubits) == 2)
    new = resynth_block(block, line3, Mode.CNOT, doubly=True, timeout_s=30)
    assert new.status == "resynthesized"
    assert cnot_count(new.circuit) == 0


def test_resynth_skips_disconnected_block():
    cm = CouplingMap(4, frozenset({(0, 1), (1, 2), (2, 3)}))
    c = Circuit(4, (Cnot(0, 1), Cnot(2, 3), Cnot(1, 2)))
    blocks = find_blocks(c)
    sub = CouplingMap(4, frozenset({(0, 1), (2, 3)}))  # disconnect the middle
    results = [resynth_block(b, sub, Mode.CNOT, doubly=True, timeout_s=30)
               for b in blocks]
    assert any(r.status == "skipped_disconnected" for r in results)
    assert all(r.gates == b.gates for r, b in zip(results, blocks)
               if r.status == "skipped_disconnected")


def test_already_optimal_block_keeps_metrics(line3):
    c = Circuit(3, (Cnot(0, 1), Rz(0.2, 1)))
    (block,) = find_blocks(c)
    new = resynth_block(block, line3, Mode.CNOT, doubly=True, timeout_s=30)
    assert cnot_count(new.circuit) == cnot_count(block.circuit)
    assert cnot_depth(new.circuit) == cnot_depth(block.circuit)


def test_pass_on_opaque_only_circuit():
    c = Circuit(2, (Opaque("h", (0,)), Opaque("cz", (0, 1))))
    cm = CouplingMap.complete(2)
    assert peephole_pass(c, cm).gates == c.gates


def test_pass_equivalent_to_direct_synthesis(triangle_circuit, line3):
    # a fully {CNOT, Rz} circuit resynthesizes as one block
    legal = Circuit(3, (
        Cnot(1, 2), Rz(0.3, 2), Cnot(0, 1), Rz(0.2, 1),
        Cnot(2, 1), Rz(0.1, 1), Cnot(0, 1), Cnot(1, 2),
    ))
    assert validate_topology(legal, line3)
    out = peephole_pass(legal, line3, Mode.CNOT, doubly=True, timeout_s=60)
    assert equivalent(out, legal)
    assert cnot_count(out) == 5  # golden optimum for this instance


def test_pass_metric_safety_and_block_equivalence():
    rng = random.Random(2024)
    cm = CouplingMap.complete(4)
    for _ in range(6):
        c = random_mixed_circuit(rng, 4, 12)
        out, pairs = peephole_with_report(c, cm, Mode.CNOT, doubly=True, timeout_s=30)
        assert validate_topology(out, cm)
        for old, new in pairs:
            assert cnot_count(new.circuit) <= cnot_count(old.circuit)
            assert canonical_equal(canonicalize(new.rep), canonicalize(old.rep))
        assert cnot_count(out) <= cnot_count(c)


def test_pass_soundness_on_pure_circuits():
    rng = random.Random(31)
    cm = CouplingMap.complete(3)
    for _ in range(5):
        c = random_cnot_rz_circuit(rng, 3, 4, 2, cm)
        out = peephole_pass(c, cm, Mode.CNOT, doubly=True, timeout_s=30)
        assert equivalent(out, c)
        assert cnot_count(out) <= cnot_count(c)


def test_second_pass_is_metric_noop():
    rng = random.Random(32)
    cm = CouplingMap.complete(3)
    c = random_cnot_rz_circuit(rng, 3, 5, 3, cm)
    once = peephole_pass(c, cm, Mode.CNOT, doubly=True, timeout_s=30)
    twice = peephole_pass(once, cm, Mode.CNOT, doubly=True, timeout_s=30)
    assert cnot_count(twice) == cnot_count(once)
    assert cnot_depth(twice) == cnot_depth(once)
