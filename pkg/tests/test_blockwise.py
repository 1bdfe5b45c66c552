import random

import pytest

from paritysat.blockwise import (
    BlockwiseConfig,
    iterate_optimize,
    partition,
    run_parallel,
    sample_blocks,
)
from paritysat.ir import (
    Circuit,
    Cnot,
    CouplingMap,
    Rz,
    cnot_count,
    cnot_depth,
    validate_topology,
)
from paritysat.peephole import splice_blocks
from paritysat.phasepoly import equivalent

from conftest import random_cnot_rz_circuit


def ring8_with_redundancy():
    """Nearest-neighbor rotation layers on a 2x4 grid plus a SWAP*SWAP no-op."""
    grid = CouplingMap.grid(2, 4)
    gates = []
    for a, b in sorted(grid.edges):
        gates += [Cnot(a, b), Rz(0.4, b), Cnot(a, b)]
    swap = [Cnot(1, 2), Cnot(2, 1), Cnot(1, 2)]
    gates[6:6] = swap + swap
    return Circuit(8, tuple(gates)), grid


def test_config_validation():
    with pytest.raises(ValueError):
        BlockwiseConfig(sample_fraction=0.0)
    with pytest.raises(ValueError):
        BlockwiseConfig(iters_full=-1)


def test_partition_single_small_block():
    c = random_cnot_rz_circuit(random.Random(0), 3, 5, 2)
    cfg = BlockwiseConfig(max_block_qubits=3, max_block_depth=50)
    blocks = partition(c, cfg)
    assert len(blocks) == 1


def test_partition_respects_qubit_cap():
    c = Circuit(4, (Cnot(0, 1), Cnot(1, 2), Cnot(2, 3)))
    cfg = BlockwiseConfig(max_block_qubits=3)
    blocks = partition(c, cfg)
    assert len(blocks) >= 2
    assert all(len(b.qubits) <= 3 for b in blocks)


def test_partition_respects_depth_cap():
    gates = tuple(Cnot(0, 1) if i % 2 == 0 else Cnot(1, 0) for i in range(10))
    c = Circuit(2, gates)
    cfg = BlockwiseConfig(max_block_qubits=3, max_block_depth=4)
    blocks = partition(c, cfg)
    assert all(cnot_depth(b.circuit) <= 4 for b in blocks)
    assert len(blocks) >= 3


def test_partition_reassembles_equivalently():
    rng = random.Random(9)
    for _ in range(5):
        c = random_cnot_rz_circuit(rng, 5, 10, 4)
        cfg = BlockwiseConfig(max_block_qubits=3, max_block_depth=5)
        blocks = partition(c, cfg)
        covered = sorted(i for b in blocks for i in b.span)
        cnot_rz = [i for i, g in enumerate(c.gates) if not hasattr(g, "name")]
        assert covered == cnot_rz
        assert equivalent(splice_blocks(c, blocks), c)


def test_sample_full_fraction_covers_partition():
    c = random_cnot_rz_circuit(random.Random(3), 4, 8, 3)
    cfg = BlockwiseConfig(max_block_qubits=3, sample_fraction=1.0, seed=5)
    rng = random.Random(cfg.seed)
    blocks = sample_blocks(c, cfg, rng)
    assert sorted(i for b in blocks for i in b.span) == list(range(len(c.gates)))


def test_sample_deterministic_and_seed_sensitive():
    c = random_cnot_rz_circuit(random.Random(8), 5, 40, 20)
    cfg = BlockwiseConfig(max_block_qubits=3, sample_fraction=0.5)
    pick = lambda seed: tuple(b.span for b in sample_blocks(c, cfg, random.Random(seed)))
    assert pick(1) == pick(1)
    assert any(pick(s) != pick(1) for s in range(2, 8))


def _double(block):
    return block


def _boom(block):
    raise RuntimeError("worker exploded")


def test_run_parallel_matches_sequential_and_isolates_failures():
    c = random_cnot_rz_circuit(random.Random(4), 4, 8, 2)
    cfg = BlockwiseConfig(max_block_qubits=2)
    blocks = partition(c, cfg)
    assert run_parallel(blocks, _double, 1) == list(blocks)
    assert run_parallel(blocks, _double, 4) == list(blocks)
    fallback = run_parallel(blocks, _boom, 1)
    assert fallback == list(blocks)
    with pytest.raises(ValueError):
        run_parallel(blocks, _double, 0)


def test_iterate_optimize_converged_input_stops_early():
    c = Circuit(3, (Cnot(0, 1), Rz(0.7, 1)))
    cm = CouplingMap.line(3)
    cfg = BlockwiseConfig(iters_full=5, iters_sample=0, per_block_timeout=30)
    out, trace = iterate_optimize(c, cm, cfg)
    full = [r for r in trace if r.stage == "full"]
    assert len(full) == 1
    assert out.gates == c.gates or cnot_count(out) == cnot_count(c)


def test_iterate_optimize_reduces_redundant_swaps():
    c, grid = ring8_with_redundancy()
    cfg = BlockwiseConfig(max_block_qubits=3, iters_full=5, iters_sample=2,
                          seed=1, per_block_timeout=30)
    out, trace = iterate_optimize(c, grid, cfg)
    counts = [r.cnot_count for r in trace]
    assert trace[0].cnot_count < cnot_count(c)  # strict decrease in iteration 1
    assert all(a >= b for a, b in zip(counts, counts[1:]))  # monotone
    assert equivalent(out, c)
    assert validate_topology(out, grid)


def test_iterate_optimize_identical_across_jobs():
    c, grid = ring8_with_redundancy()
    runs = []
    for jobs in (1, 8):
        cfg = BlockwiseConfig(max_block_qubits=3, iters_full=3, iters_sample=2,
                              seed=7, jobs=jobs, per_block_timeout=30)
        out, _ = iterate_optimize(c, grid, cfg)
        runs.append(out.gates)
    assert runs[0] == runs[1]


def test_iterate_optimize_rejects_bad_topology():
    c = Circuit(3, (Cnot(0, 2),))
    cm = CouplingMap.line(3)
    with pytest.raises(ValueError):
        iterate_optimize(c, cm, BlockwiseConfig())


def test_single_block_timeout_leaves_it_unchanged():
    from paritysat.encoder import Mode
    from paritysat.peephole import resynth_block

    # two redundant-pair blocks separated by qubits; starve only the first
    c = Circuit(4, (Cnot(0, 1), Cnot(0, 1), Cnot(2, 3), Cnot(2, 3)))
    cm = CouplingMap.line(4)
    cfg = BlockwiseConfig(max_block_qubits=2)
    blocks = partition(c, cfg)
    assert len(blocks) == 2
    starved = blocks[0]

    def worker(block):
        timeout = 0.0 if block.span == starved.span else 30.0
        return resynth_block(block, cm, Mode.CNOT, doubly=True, timeout_s=timeout)

    results = run_parallel(blocks, worker, jobs=1)
    assert results[0].gates == starved.gates
    assert results[0].status == "failed_budget"
    assert cnot_count(results[1].circuit) == 0
    spliced = splice_blocks(c, results)
    assert cnot_count(spliced) == 2
    assert equivalent(spliced, c)
