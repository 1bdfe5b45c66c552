"""Phase-polynomial extraction, canonicalization, and equivalence checking."""
from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass, field

from .ir import (
    Angle,
    Circuit,
    Cnot,
    ParityMatrix,
    ParityTable,
    PhasePolyRep,
    Rz,
    mask_to_bits,
    bits_to_mask,
)

EPS_ANGLE = 1e-9
TWO_PI = 2.0 * math.pi


class UnsupportedGateError(ValueError):
    """Raised when a gate outside {CNOT, Rz} reaches a phase-poly operation."""


def extract_rep(circuit: Circuit, initial: ParityMatrix | None = None) -> PhasePolyRep:
    """Walk a {CNOT, Rz} circuit and read off its phase-polynomial form.

    Each CNOT XORs the control row into the target row of the running
    parity state; each Rz records (current row of its qubit, angle) in
    encounter order.
    """
    if initial is None:
        initial = ParityMatrix.identity(circuit.num_qubits)
    if initial.n != circuit.num_qubits:
        raise ValueError("initial parity size does not match circuit")
    rows = list(initial.rows)
    terms: list[int] = []
    angles: list[Angle] = []
    for g in circuit.gates:
        if isinstance(g, Cnot):
            rows[g.target] ^= rows[g.control]
        elif isinstance(g, Rz):
            terms.append(rows[g.qubit])
            angles.append(g.angle)
        else:
            raise UnsupportedGateError(f"unsupported gate {g.name!r} in phase-poly extraction")
    final = ParityMatrix(tuple(rows))
    return PhasePolyRep(initial, final, ParityTable(circuit.num_qubits, tuple(terms), tuple(angles)))


# ---------------------------------------------------------------------------
# Canonical form
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class MergedAngle:
    """Total rotation of one parity term: numeric part plus label multiset."""

    numeric: float
    labels: tuple[tuple[str, int], ...] = ()

    def is_zero(self, eps: float = EPS_ANGLE) -> bool:
        if self.labels:
            return False
        d = self.numeric % TWO_PI
        return min(d, TWO_PI - d) < eps


def _angles_close(a: MergedAngle, b: MergedAngle, eps: float) -> bool:
    if a.labels != b.labels:
        return False
    d = (a.numeric - b.numeric) % TWO_PI
    return min(d, TWO_PI - d) < eps


@dataclass
class CanonicalRep:
    """Equivalence-ready form: final parity plus term -> merged angle."""

    final: ParityMatrix
    phase_map: dict[int, MergedAngle] = field(default_factory=dict)


def canonicalize(rep: PhasePolyRep, eps: float = EPS_ANGLE) -> CanonicalRep:
    """Merge duplicate terms by angle summation and drop numeric zeros.

    Symbolic labels never cancel numerically: a term carrying labels is
    kept even when its numeric part vanishes, since the parameter may be
    bound nonzero later.
    """
    numeric: dict[int, float] = {}
    labels: dict[int, Counter] = {}
    order: list[int] = []
    for term, angle in zip(rep.table.terms, rep.table.angles):
        if term not in numeric:
            numeric[term] = 0.0
            labels[term] = Counter()
            order.append(term)
        if isinstance(angle, str):
            labels[term][angle] += 1
        else:
            numeric[term] += float(angle)
    phase_map: dict[int, MergedAngle] = {}
    for term in order:
        merged = MergedAngle(numeric[term] % TWO_PI, tuple(sorted(labels[term].items())))
        if not merged.is_zero(eps):
            phase_map[term] = merged
    return CanonicalRep(rep.final, phase_map)


def canonical_equal(a: CanonicalRep, b: CanonicalRep, eps: float = EPS_ANGLE) -> bool:
    if a.final.rows != b.final.rows:
        return False
    if set(a.phase_map) != set(b.phase_map):
        return False
    return all(_angles_close(a.phase_map[t], b.phase_map[t], eps) for t in a.phase_map)


def equivalent(c1: Circuit, c2: Circuit, initial: ParityMatrix | None = None,
               eps: float = EPS_ANGLE) -> bool:
    """Phase-polynomial equivalence of two {CNOT, Rz} circuits."""
    if c1.num_qubits != c2.num_qubits:
        raise ValueError("circuits must have the same qubit count")
    r1 = canonicalize(extract_rep(c1, initial), eps)
    r2 = canonicalize(extract_rep(c2, initial), eps)
    return canonical_equal(r1, r2, eps)


def angle_components(angle: MergedAngle, eps: float = EPS_ANGLE) -> tuple[Angle, ...]:
    """Expand a merged angle into individually placeable Rz angles."""
    out: list[Angle] = []
    d = angle.numeric % TWO_PI
    if min(d, TWO_PI - d) >= eps:
        out.append(angle.numeric)
    for label, count in angle.labels:
        out.extend([label] * count)
    return tuple(out)


def merged_table(rep: PhasePolyRep, eps: float = EPS_ANGLE) -> ParityTable:
    """Synthesis-ready table: unique terms, duplicate angles merged.

    Entries stay in first-appearance order; a merged composite angle is
    expanded back into consecutive per-component entries so every angle
    remains a plain number or label.
    """
    canon = canonicalize(rep, eps)
    terms: list[int] = []
    angles: list[Angle] = []
    for term, merged in canon.phase_map.items():
        for comp in angle_components(merged, eps):
            terms.append(term)
            angles.append(comp)
    return ParityTable(rep.n, tuple(terms), tuple(angles))


# ---------------------------------------------------------------------------
# JSON interchange
# ---------------------------------------------------------------------------


def rep_to_json(rep: PhasePolyRep) -> dict:
    return {
        "n": rep.n,
        "initial": rep.initial.to_bits(),
        "final": rep.final.to_bits(),
        "terms": [mask_to_bits(t, rep.n) for t in rep.table.terms],
        "angles": list(rep.table.angles),
    }


def rep_from_json(obj: dict) -> PhasePolyRep:
    n = int(obj["n"])
    initial = ParityMatrix.from_bits(obj["initial"])
    final = ParityMatrix.from_bits(obj["final"])
    terms = tuple(bits_to_mask(t) for t in obj["terms"])
    angles = tuple(a if isinstance(a, str) else float(a) for a in obj["angles"])
    return PhasePolyRep(initial, final, ParityTable(n, terms, angles))


__all__ = [
    "EPS_ANGLE", "UnsupportedGateError", "MergedAngle", "CanonicalRep",
    "extract_rep", "canonicalize", "canonical_equal", "equivalent",
    "angle_components", "merged_table", "rep_to_json", "rep_from_json",
]
