"""Generators and rewrites for circuits built from global MS pulses.

Each generator that implements a standard unitary is returned as a
ConstructionSpec pairing the pulse-based circuit with a local-gate reference
for the same unitary; the verification harness checks them against each
other up to a global phase (on the data register when ancillas are
involved).

Multi-controlled phase references are synthesized exactly from the parity
expansion x1*...*xm = sum over nonempty subsets S of (-1)^(|S|+1)(xor S) /
2^(m-1), realized as CNOT folds plus RZ, with the residual scalar tracked
in an explicit global-phase gate.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from itertools import combinations
from typing import Iterable, Sequence

from .circuit import (Circuit, Gate, PerPair, Uniform, cnot, gms,
                      global_phase, h, rx, ry, rz, xx)

PI = math.pi


@dataclass(frozen=True)
class ConstructionSpec:
    """A generated pulse circuit paired with its local-gate reference."""

    name: str
    parameters: dict
    generated: Circuit
    reference: Circuit

    @property
    def check_kind(self) -> str:
        return "ancilla" if self.generated.ancillas else "phase"


def embed(gates: Iterable[Gate], wires: Sequence[int]) -> list[Gate]:
    """Remap gates of a small circuit onto the given wires of a wider one.

    Position-dependent profiles (exponential, power-law) are frozen into
    per-pair tables first, since wire distances change under the mapping.
    """
    out = []
    for g in gates:
        qs = tuple(wires[q] for q in g.qubits)
        if g.kind != "GMS":
            out.append(Gate(g.kind, qs, g.theta))
        elif isinstance(g.profile, Uniform):
            out.append(gms(qs, g.profile))
        else:
            table = tuple((wires[i], wires[j], chi) for i, j, chi in g.pair_angles())
            out.append(gms(qs, PerPair(table)))
    return out


# ---------------------------------------------------------------------------
# Exact local-gate references
# ---------------------------------------------------------------------------

def parity_phase_gates(qubits: Sequence[int], coeff: float) -> tuple[list[Gate], float]:
    """Gates for diag phase exp(i*coeff*(xor of qubits)), plus the scalar
    correction (coeff/2) the caller must fold into a global-phase gate."""
    target = qubits[-1]
    folds = [cnot(q, target) for q in qubits[:-1]]
    unfolds = [cnot(q, target) for q in reversed(qubits[:-1])]
    return folds + [rz(target, coeff)] + unfolds, coeff / 2


def controlled_z_reference(m: int) -> Circuit:
    """Exact m-qubit controlled-Z ladder: diag(1, ..., 1, -1)."""
    if m < 1:
        raise ValueError("need at least one qubit")
    gates: list[Gate] = []
    scalar = 0.0
    for size in range(1, m + 1):
        coeff = PI * (-1) ** (size + 1) / 2 ** (m - 1)
        for subset in combinations(range(m), size):
            sub_gates, extra = parity_phase_gates(subset, coeff)
            gates.extend(sub_gates)
            scalar += extra
    gates.append(global_phase(scalar))
    return Circuit(m, tuple(gates))


def toffoli_reference(n: int) -> Circuit:
    """n-qubit Toffoli (controls 0..n-2, target n-1) from CNOT/RZ/H."""
    target = n - 1
    ladder = controlled_z_reference(n)
    return Circuit(n, (h(target),) + ladder.gates + (h(target),))


def _shared_control_cnots(control: int, targets: Sequence[int]) -> tuple[Gate, ...]:
    return tuple(cnot(control, t) for t in targets)


# ---------------------------------------------------------------------------
# Fan constructions
# ---------------------------------------------------------------------------

def _cnot_xx_gates(control: int, target: int) -> list[Gate]:
    return [ry(control, PI / 2), xx(control, target, PI / 2),
            rx(control, -PI / 2), rx(target, -PI / 2), ry(control, -PI / 2)]


def _fan_gates(control: int, targets: Sequence[int]) -> list[Gate]:
    """Shared-control CNOT fan as two pulses (one for a single target).

    The control's trailing RX angle accumulates one -pi/2 per target, which
    is what makes the pulse pair equal the whole CNOT set at once.
    """
    targets = sorted(targets)
    if len(targets) == 1:
        return _cnot_xx_gates(control, targets[0])
    support = sorted([control] + targets)
    gates = [ry(control, PI / 2),
             gms(support, Uniform(PI / 2)),
             gms(targets, Uniform(-PI / 2)),
             rx(control, -len(targets) * PI / 2)]
    gates += [rx(t, -PI / 2) for t in targets]
    gates.append(ry(control, -PI / 2))
    return gates


def star_coupling(n: int, hub: int, chi: float) -> Circuit:
    """Two uniform pulses leaving only the hub's couplings active:
    full-register GMS(chi) then GMS(-chi) on the hub's complement."""
    if n < 3:
        raise ValueError("need n >= 3")
    if not 0 <= hub < n:
        raise ValueError("hub out of range")
    return Circuit(n, tuple(_star_gates(range(n), hub, chi)))


def _star_gates(qubits: Iterable[int], hub: int, chi: float) -> list[Gate]:
    qubits = sorted(qubits)
    rest = [q for q in qubits if q != hub]
    gates = [gms(qubits, Uniform(chi))]
    if len(rest) >= 2:
        gates.append(gms(rest, Uniform(-chi)))
    return gates


def fanout(n: int, control: int = 0) -> ConstructionSpec:
    if n < 2:
        raise ValueError("need n >= 2")
    if not 0 <= control < n:
        raise ValueError("control out of range")
    targets = [q for q in range(n) if q != control]
    generated = Circuit(n, tuple(_fan_gates(control, targets)))
    reference = Circuit(n, _shared_control_cnots(control, targets))
    return ConstructionSpec("fanout", {"n": n, "control": control},
                            generated, reference)


def fanin(n: int, target: int = 0) -> ConstructionSpec:
    """Shared-target CNOT set: Hadamard conjugation of the fan-out."""
    if n < 2:
        raise ValueError("need n >= 2")
    controls = [q for q in range(n) if q != target]
    layer = [h(q) for q in range(n)]
    generated = Circuit(n, tuple(layer + _fan_gates(target, controls) + layer))
    reference = Circuit(n, tuple(cnot(c, target) for c in controls))
    return ConstructionSpec("fanin", {"n": n, "target": target},
                            generated, reference)


def parity_measure_prefix(n: int, target: int = 0) -> Circuit:
    """Fan-in truncated after its first pulse.

    Only the measured wire's dressing is kept; the dropped second pulse and
    target dressings act entirely on other wires, so the measured wire's
    Z statistics match the full fan-in on every basis input.
    """
    if n < 3:
        raise ValueError("need n >= 3")
    gates = [h(q) for q in range(n)]
    gates += [ry(target, PI / 2),
              gms(range(n), Uniform(PI / 2)),
              rx(target, -(n - 1) * PI / 2),
              ry(target, -PI / 2),
              h(target)]
    return Circuit(n, tuple(gates))


def cnot_via_xx(control: int = 0, target: int = 1, n: int | None = None) -> ConstructionSpec:
    if n is None:
        n = max(control, target) + 1
    generated = Circuit(n, tuple(_cnot_xx_gates(control, target)))
    reference = Circuit(n, (cnot(control, target),))
    return ConstructionSpec("cnot_via_xx", {"control": control, "target": target},
                            generated, reference)


def cnot_via_4gms(n: int, control: int = 0, target: int = 1) -> ConstructionSpec:
    """CNOT from full-register pulses only: two star isolations leave a
    single XX(pi/2) between control and target, then standard dressing."""
    if n < 3:
        raise ValueError("need n >= 3")
    if control == target or not (0 <= control < n and 0 <= target < n):
        raise ValueError("bad control/target")
    keep = [q for q in range(n) if q != target]
    gates = [ry(control, PI / 2)]
    gates += _star_gates(range(n), control, PI / 2)
    gates += _star_gates(keep, control, -PI / 2)
    gates += [rx(control, -PI / 2), rx(target, -PI / 2), ry(control, -PI / 2)]
    generated = Circuit(n, tuple(gates))
    reference = Circuit(n, (cnot(control, target),))
    return ConstructionSpec("cnot_via_4gms", {"n": n, "control": control,
                                              "target": target},
                            generated, reference)


# ---------------------------------------------------------------------------
# [[15,1,3]] Reed-Muller encoder (T-state distillation circuit)
# ---------------------------------------------------------------------------

# Wire labels of the standard encoder drawing, top to bottom; the five fan
# columns are given as (control position, target positions).
TDISTILL_LABELS = (1, 2, 4, 8, 3, 5, 6, 7, 9, 10, 11, 12, 13, 14, 15)
TDISTILL_FANS = (
    (0, (6, 7, 9, 10, 11, 12, 14)),
    (1, (5, 7, 8, 10, 11, 13, 14)),
    (2, (4, 7, 8, 9, 12, 13, 14)),
    (3, (4, 5, 6, 10, 12, 13, 14)),
    (14, (4, 5, 6, 8, 9, 11)),
)


def tdistill() -> ConstructionSpec:
    """The 34-CNOT encoder as five fan columns of two pulses each."""
    gates: list[Gate] = []
    ref: list[Gate] = []
    for control, targets in TDISTILL_FANS:
        gates += _fan_gates(control, targets)
        ref += _shared_control_cnots(control, targets)
    return ConstructionSpec("tdistill", {},
                            Circuit(15, tuple(gates)),
                            Circuit(15, tuple(ref)))


# ---------------------------------------------------------------------------
# Phase-polynomial constructions
# ---------------------------------------------------------------------------

def phase_polynomial_identity(n: int, theta: float) -> Circuit:
    """Hadamard-conjugated uniform pulse: applies phase exp(i*theta) to the
    parity of every qubit pair, up to one global phase."""
    if n < 2:
        raise ValueError("need n >= 2")
    layer = [h(q) for q in range(n)]
    return Circuit(n, tuple(layer + [gms(range(n), Uniform(theta))] + layer))


def ccz_3gms() -> ConstructionSpec:
    """Doubly-controlled Z on wires 0..2 from three pulses and one ancilla.

    The ancilla's parity rotation is about Y, not Z: with an odd number of
    data wires the pulse pair parks the ancilla in a Y eigenbasis (the
    conditional X rotation it accumulates is +-pi/2 rather than 0 or pi),
    so only a Y rotation is diagonal there.  A Z rotation in that slot
    leaks 0.38 of the ancilla population; see the erratum note in the test
    suite.
    """
    a, b, c, anc = 0, 1, 2, 3
    gates = [rz(a, PI / 4), rz(b, PI / 4), h(c),
             ry(a, PI / 2), ry(b, PI / 2), rx(c, PI / 4),
             gms((a, b, c, anc), Uniform(PI / 2)),
             gms((a, b, c), Uniform(-PI / 4)), ry(anc, PI / 4),
             gms((a, b, c, anc), Uniform(-PI / 2)),
             ry(a, -PI / 2), ry(b, -PI / 2), h(c)]
    generated = Circuit(4, tuple(gates), frozenset({anc}))
    return ConstructionSpec("ccz_3gms", {}, generated, controlled_z_reference(3))


def cccz_4gms() -> ConstructionSpec:
    """Triply-controlled Z on wires 0..3 from four pulses and one ancilla."""
    a, b, c, d, anc = 0, 1, 2, 3, 4
    allq = (a, b, c, d, anc)
    gates = [rz(a, PI / 8), rz(b, PI / 8), rz(c, PI / 8), h(d),
             ry(a, PI / 2), ry(b, PI / 2), ry(c, PI / 2), rx(d, PI / 8),
             gms(allq, Uniform(PI / 2)),
             rz(anc, -PI / 8),
             ry(anc, PI / 2),
             gms(allq, Uniform(PI / 8)),
             gms((a, b, c, d), Uniform(-PI / 4)), ry(anc, -PI / 2),
             gms(allq, Uniform(-PI / 2)),
             ry(a, -PI / 2), ry(b, -PI / 2), ry(c, -PI / 2), h(d)]
    generated = Circuit(5, tuple(gates), frozenset({anc}))
    return ConstructionSpec("cccz_4gms", {}, generated, controlled_z_reference(4))


def cccz_3gms() -> ConstructionSpec:
    """Triply-controlled Z from three full-register pulses: the four-pulse
    form after shrinking its subset pulse and cancelling the inverse pair."""
    a, b, c, d, anc = 0, 1, 2, 3, 4
    allq = (a, b, c, d, anc)
    gates = [rz(a, PI / 8), rz(b, PI / 8), rz(c, PI / 8), h(d),
             ry(a, PI / 2), ry(b, PI / 2), ry(c, PI / 2), rx(d, PI / 8),
             gms(allq, Uniform(PI / 2)),
             ry(anc, -PI / 2), rx(anc, PI / 8),
             gms(allq, Uniform(-PI / 8)),
             ry(anc, PI / 2),
             gms(allq, Uniform(-PI / 2)),
             ry(a, -PI / 2), ry(b, -PI / 2), ry(c, -PI / 2), h(d)]
    generated = Circuit(5, tuple(gates), frozenset({anc}))
    return ConstructionSpec("cccz_3gms", {}, generated, controlled_z_reference(4))


def toffoli3_gms() -> ConstructionSpec:
    """Toffoli on 3 wires (target 2) from three size-3 pulses, no ancilla."""
    gates = [ry(0, PI / 2), ry(1, PI / 2), ry(2, PI / 2), rz(2, PI / 4),
             gms((0, 1, 2), Uniform(PI / 2)),
             rx(0, -PI / 2), rx(1, -PI / 2), rx(2, -PI / 2), rz(2, -PI / 2),
             rx(0, -PI / 4), rx(1, -PI / 4), rx(2, -PI / 4),
             gms((0, 1, 2), Uniform(PI / 4)),
             rz(2, PI / 2),
             gms((0, 1, 2), Uniform(PI / 2)),
             rx(0, PI / 2), rx(1, PI / 2), rx(2, PI / 2),
             ry(0, -PI / 2), ry(1, -PI / 2), ry(2, -PI / 2)]
    return ConstructionSpec("toffoli3_gms", {},
                            Circuit(3, tuple(gates)), toffoli_reference(3))


def toffoli4_7gms() -> ConstructionSpec:
    """Ancilla-free Toffoli-4 (target 3) from seven pulses."""
    sub = (0, 1, 2)
    allq = (0, 1, 2, 3)
    gates = [ry(0, PI / 2), ry(1, PI / 2), ry(2, PI / 2), ry(3, PI / 2),
             gms(allq, Uniform(PI / 2)),
             rx(0, -PI / 2), rx(1, -PI / 2), rx(2, -PI / 2), rx(3, -PI / 2),
             gms(sub, Uniform(-PI / 8)), ry(3, PI / 2),
             gms(allq, Uniform(PI / 8)),
             ry(2, -PI / 2), ry(3, -PI / 2),
             gms(sub, Uniform(PI / 2)),
             rz(2, -PI / 8), rz(3, -PI / 8),
             gms(sub, Uniform(-PI / 2)),
             ry(2, PI / 2),
             rx(0, PI / 2), rx(1, PI / 2), rx(2, PI / 2), rx(3, PI / 2),
             gms(allq, Uniform(-PI / 2)),
             ry(3, -PI / 2),
             rx(0, PI / 8), rx(1, PI / 8), rx(2, PI / 8), rx(3, PI / 8),
             gms(allq, Uniform(-PI / 8)),
             ry(3, PI / 2),
             ry(0, -PI / 2), ry(1, -PI / 2), ry(2, -PI / 2), ry(3, -PI / 2)]
    return ConstructionSpec("toffoli4_7gms", {},
                            Circuit(4, tuple(gates)), toffoli_reference(4))


def _toffoli4_unit(x: int, y: int, z: int, target: int, helper: int) -> list[Gate]:
    """Three-pulse Toffoli-4 as an embeddable unit (helper enters/leaves |0>)."""
    spec = cccz_3gms()
    inner = [h(3)] + list(spec.generated.gates) + [h(3)]
    return embed(inner, [x, y, z, target, helper])


def _toffoli3_unit(x: int, y: int, target: int) -> list[Gate]:
    return embed(list(toffoli3_gms().generated.gates), [x, y, target])


def toffoli_n(n: int) -> ConstructionSpec:
    """Multiply-controlled NOT from a chain of three-pulse Toffoli-4 units.

    Controls 0..n-2, target n-1; compute units AND pairs of controls into
    fresh tree ancillas, a final unit hits the target, then the computes
    run in reverse.  Odd n seeds the chain with one Toffoli-3 pair.  Pulse
    count: 3n-9 for even n, 3n-6 for odd n; every ancilla returns to |0>.
    """
    if n < 4:
        raise ValueError("need n >= 4")
    controls = list(range(n - 1))
    target = n - 1
    even = n % 2 == 0
    n_tree = (n - 4) // 2 if even else (n - 3) // 2
    total = n + n_tree + 1
    helper = total - 1  # shared inner ancilla of the Toffoli-4 units
    tree = list(range(n, n + n_tree))

    compute: list[tuple] = []
    if n == 4:
        final = ("t4", controls[0], controls[1], controls[2], target)
    else:
        nxt = iter(tree)
        if even:
            acc = next(nxt)
            compute.append(("t4", controls[0], controls[1], controls[2], acc))
            rest = controls[3:]
        else:
            acc = next(nxt)
            compute.append(("t3", controls[0], controls[1], acc))
            rest = controls[2:]
        while len(rest) > 2:
            out = next(nxt)
            compute.append(("t4", acc, rest[0], rest[1], out))
            acc = out
            rest = rest[2:]
        final = ("t4", acc, rest[0], rest[1], target)

    gates: list[Gate] = []
    for unit in compute + [final] + list(reversed(compute)):
        if unit[0] == "t4":
            gates += _toffoli4_unit(unit[1], unit[2], unit[3], unit[4], helper)
        else:
            gates += _toffoli3_unit(unit[1], unit[2], unit[3])
    generated = Circuit(total, tuple(gates), frozenset(range(n, total)))
    return ConstructionSpec("toffoli_n", {"n": n}, generated, toffoli_reference(n))


# ---------------------------------------------------------------------------
# Rewrites
# ---------------------------------------------------------------------------

def _half_extend(gate: Gate, extra: int) -> Gate:
    """Grow a GMS by one spectator wire at half angles.

    The spectator's couplings cancel between the echoed pulse pair whatever
    their value; uniform profiles extend uniformly, position-based ones by
    their own distance law, explicit tables with zero spectator coupling.
    """
    grown = sorted(set(gate.qubits) | {extra})
    prof = gate.profile
    if isinstance(prof, Uniform):
        return gms(grown, Uniform(prof.theta / 2))
    table = []
    for i, j in combinations(grown, 2):
        if extra in (i, j) and isinstance(prof, PerPair):
            table.append((i, j, 0.0))
        else:
            table.append((i, j, prof.angle(i, j) / 2))
    return gms(grown, PerPair(tuple(table)))


def gms_shrink(circuit: Circuit) -> Circuit:
    """Rewrite subset pulses to full-register pulses.

    A GMS missing k wires becomes 2**k full-register pulses at geometrically
    halved angles, each exclusion level wrapped in an RZ(pi)/RZ(-pi) echo on
    the reintroduced wire; the echo flips that wire's couplings so they
    cancel while the original ones double back to strength.
    """
    n = circuit.n_qubits
    out: list[Gate] = []
    for g in circuit.gates:
        if g.kind != "GMS" or len(g.qubits) == n:
            out.append(g)
            continue
        seq = [g]
        for extra in (q for q in range(n) if q not in g.qubits):
            grown_seq: list[Gate] = []
            for item in seq:
                if item.kind == "GMS" and extra not in item.qubits:
                    grown = _half_extend(item, extra)
                    grown_seq += [grown, rz(extra, PI), grown, rz(extra, -PI)]
                else:
                    grown_seq.append(item)
            seq = grown_seq
        out.extend(seq)
    return Circuit(n, tuple(out), circuit.ancillas)


def gms_dagger_rewrite(n: int, chi: float) -> Circuit:
    """Inverse of a uniform full-register GMS without negative couplings.

    One pulse at pi - chi plus RX((n-1)pi) on every wire and the explicit
    scalar (-i)^(n(n-1)/2); equals GMS(-chi) exactly, including phase.
    """
    if n < 2:
        raise ValueError("need n >= 2")
    if not 0 <= chi <= PI:
        raise ValueError("chi must lie in [0, pi]")
    pairs = n * (n - 1) // 2
    gates = [gms(range(n), Uniform(PI - chi))]
    gates += [rx(q, (n - 1) * PI) for q in range(n)]
    gates.append(global_phase(-PI / 2 * pairs))
    return Circuit(n, tuple(gates))


def _echo_partner(gates: Sequence[Gate], i: int, q: int, step: int) -> int | None:
    """Nearest XX/GMS through commuting spectators in the given direction."""
    j = i + step
    while 0 <= j < len(gates):
        cand = gates[j]
        if q in cand.qubits:
            if cand.kind not in ("XX", "GMS"):
                return None
            lo, hi = (j + 1, i) if step < 0 else (i + 1, j)
            support = set(cand.qubits)
            if all(support.isdisjoint(gates[k].qubits) for k in range(lo, hi)):
                return j
            return None
        j += step
    return None


def _echo_collapse(gate: Gate, q: int) -> list[Gate]:
    """Result of an identical XX/GMS pair straddling RZ(pi) on wire q: the
    q couplings cancel, the rest double."""
    rest = sorted(set(gate.qubits) - {q})
    if len(rest) < 2:
        return []
    if gate.kind == "GMS" and isinstance(gate.profile, Uniform):
        return [gms(rest, Uniform(2 * gate.profile.theta))]
    angle = {(min(a, b), max(a, b)): chi for a, b, chi in gate.pair_angles()} \
        if gate.kind == "GMS" else {}
    table = tuple((a, b, 2 * angle[(a, b)]) for a, b in combinations(rest, 2))
    return [gms(rest, PerPair(table))]


def spin_echo_cancel(circuit: Circuit) -> Circuit:
    """Peephole deletion of identical XX/GMS pairs straddling an RZ(pi).

    The echo wire's couplings vanish; pulses larger than the echoed pair
    collapse to a doubled-angle pulse on the remaining wires.  Applied to a
    fixpoint; unitary preserved exactly.
    """
    gates = list(circuit.gates)
    changed = True
    while changed:
        changed = False
        for i, g in enumerate(gates):
            if g.kind != "RZ" or abs(g.theta) != PI:
                continue
            q = g.qubits[0]
            left = _echo_partner(gates, i, q, -1)
            right = _echo_partner(gates, i, q, +1)
            if left is None or right is None or gates[left] != gates[right]:
                continue
            collapsed = _echo_collapse(gates[left], q)
            gates = (gates[:left] + collapsed + gates[left + 1:right]
                     + gates[right + 1:])
            changed = True
            break
    return Circuit(circuit.n_qubits, tuple(gates), circuit.ancillas)


def cancel_inverse_gms(circuit: Circuit) -> Circuit:
    """Drop GMS pairs that are exact inverses separated only by gates on
    disjoint wires."""
    gates = list(circuit.gates)
    changed = True
    while changed:
        changed = False
        for i, g in enumerate(gates):
            if g.kind != "GMS":
                continue
            support = set(g.qubits)
            for j in range(i + 1, len(gates)):
                other = gates[j]
                if support.isdisjoint(other.qubits):
                    continue
                if (other.kind == "GMS" and other.qubits == g.qubits
                        and all(abs(ca + cb) == 0.0 for (_, _, ca), (_, _, cb)
                                in zip(g.pair_angles(), other.pair_angles()))):
                    gates = gates[:i] + gates[i + 1:j] + gates[j + 1:]
                    changed = True
                break
            if changed:
                break
    return Circuit(circuit.n_qubits, tuple(gates), circuit.ancillas)
