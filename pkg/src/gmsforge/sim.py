"""Dense reference semantics: unitaries, statevector runs, equivalence checks.

Basis convention (fixed once, all verifications depend on it): qubit 0 is
the most significant bit of the basis index, so |q0 q1 ... q_{n-1}> has
index sum(q_k * 2**(n-1-k)).

The dense-unitary path is guarded at 12 qubits by default (matrices get to
the 100 MB scale there); override with the GMSFORGE_MAX_DENSE_QUBITS
environment variable.  The statevector path has no such guard and is used
for wide-register parity checks.
"""

from __future__ import annotations

import cmath
import math
import os
from dataclasses import dataclass

import numpy as np

from .circuit import Circuit
from .kernels import BACKEND

DEFAULT_DENSE_GUARD = 12


class DenseGuardError(RuntimeError):
    """Dense unitary request above the configured qubit guard."""


def max_dense_qubits() -> int:
    raw = os.environ.get("GMSFORGE_MAX_DENSE_QUBITS", "")
    return int(raw) if raw.isdigit() else DEFAULT_DENSE_GUARD


def _mask(n: int, q: int) -> int:
    return 1 << (n - 1 - q)


def _run(circuit: Circuit, st: np.ndarray, backend=None) -> np.ndarray:
    """Apply every gate of ``circuit`` to the (dim, batch) array in place."""
    be = backend or BACKEND
    n = circuit.n_qubits
    inv_sqrt2 = 1.0 / math.sqrt(2.0)
    for g in circuit.gates:
        kind = g.kind
        if kind == "H":
            m = _mask(n, g.qubits[0])
            be.apply_1q(st, inv_sqrt2 + 0j, inv_sqrt2 + 0j,
                        inv_sqrt2 + 0j, -inv_sqrt2 + 0j, m)
        elif kind == "RX":
            c, s = math.cos(g.theta / 2), math.sin(g.theta / 2)
            be.apply_1q(st, c + 0j, -1j * s, -1j * s, c + 0j, _mask(n, g.qubits[0]))
        elif kind == "RY":
            c, s = math.cos(g.theta / 2), math.sin(g.theta / 2)
            be.apply_1q(st, c + 0j, -s + 0j, s + 0j, c + 0j, _mask(n, g.qubits[0]))
        elif kind == "RZ":
            ph = cmath.exp(1j * g.theta / 2)
            be.apply_1q(st, ph.conjugate(), 0j, 0j, ph, _mask(n, g.qubits[0]))
        elif kind == "CNOT":
            be.apply_cnot(st, _mask(n, g.qubits[0]), _mask(n, g.qubits[1]))
        elif kind == "CP":
            be.apply_cp(st, _mask(n, g.qubits[0]), _mask(n, g.qubits[1]),
                        cmath.exp(1j * g.theta))
        elif kind == "XX":
            c, s = math.cos(g.theta / 2), math.sin(g.theta / 2)
            be.apply_xx(st, c + 0j, s + 0j, _mask(n, g.qubits[0]), _mask(n, g.qubits[1]))
        elif kind == "GMS":
            for i, j, chi in g.pair_angles():
                c, s = math.cos(chi / 2), math.sin(chi / 2)
                be.apply_xx(st, c + 0j, s + 0j, _mask(n, i), _mask(n, j))
        elif kind == "PHASE":
            be.apply_scale(st, cmath.exp(1j * g.theta))
        else:  # pragma: no cover
            raise ValueError(f"unhandled gate kind {kind}")
    return st


def unitary_of(circuit: Circuit, backend=None) -> np.ndarray:
    """Dense unitary of the circuit (product of gate matrices in order)."""
    guard = max_dense_qubits()
    if circuit.n_qubits > guard:
        raise DenseGuardError(
            f"dense unitary needs {circuit.n_qubits} qubits, guard is {guard} "
            "(set GMSFORGE_MAX_DENSE_QUBITS to raise it)")
    dim = 1 << circuit.n_qubits
    st = np.eye(dim, dtype=np.complex128)
    return _run(circuit, st, backend)


def apply(circuit: Circuit, state: np.ndarray, backend=None) -> np.ndarray:
    """Gate-wise application to a statevector; no dense-width guard."""
    dim = 1 << circuit.n_qubits
    state = np.asarray(state, dtype=np.complex128)
    if state.shape != (dim,):
        raise ValueError(f"state has shape {state.shape}, expected ({dim},)")
    st = state.reshape(dim, 1).copy()
    return _run(circuit, st, backend).reshape(dim)


def basis_state(n_qubits: int, index: int) -> np.ndarray:
    state = np.zeros(1 << n_qubits, dtype=np.complex128)
    state[index] = 1.0
    return state


@dataclass(frozen=True)
class PhaseMatch:
    ok: bool
    phase: complex
    max_deviation: float


def equiv_phase(u: np.ndarray, v: np.ndarray, tol: float = 1e-9) -> PhaseMatch:
    """Test u == phase * v entrywise within tol.

    The candidate phase is read off at v's largest-magnitude entry (avoids
    dividing by near-zeros) and renormalized to unit modulus.
    """
    if u.shape != v.shape:
        raise ValueError(f"shape mismatch: {u.shape} vs {v.shape}")
    flat = np.argmax(np.abs(v))
    pivot = v.reshape(-1)[flat]
    if abs(pivot) == 0.0:
        return PhaseMatch(False, 1.0 + 0j, float("inf"))
    lam = u.reshape(-1)[flat] / pivot
    if abs(lam) == 0.0:
        return PhaseMatch(False, 1.0 + 0j, float(np.max(np.abs(u - v))))
    lam /= abs(lam)
    dev = float(np.max(np.abs(u - lam * v)))
    return PhaseMatch(dev <= tol, lam, dev)


@dataclass(frozen=True)
class AncillaMatch:
    ok: bool
    failure: str | None  # None | "leakage" | "mismatch"
    phase: complex
    max_deviation: float
    leakage: float


def equiv_on_ancilla(circuit: Circuit, data_unitary: np.ndarray,
                     tol: float = 1e-9, backend=None) -> AncillaMatch:
    """Check the circuit acts as ``data_unitary`` on the data register.

    Every data basis state |x>|0...0> is run through the circuit; the result
    must be (V|x>)|0...0> with one common global phase.  Residual population
    on the ancilla-neq-0 rows above tol is reported as the distinct
    "leakage" failure.
    """
    n = circuit.n_qubits
    data = circuit.data_qubits
    anc = sorted(circuit.ancillas)
    if not anc:
        raise ValueError("circuit declares no ancillas")
    d = len(data)
    ddim = 1 << d
    if data_unitary.shape != (ddim, ddim):
        raise ValueError(
            f"reference acts on {data_unitary.shape}, data register is {ddim}")

    def embed(x: int) -> int:
        idx = 0
        for pos, q in enumerate(data):
            if (x >> (d - 1 - pos)) & 1:
                idx |= _mask(n, q)
        return idx

    cols = np.zeros((1 << n, ddim), dtype=np.complex128)
    for x in range(ddim):
        cols[embed(x), x] = 1.0
    _run(circuit, cols, backend)

    data_rows = np.fromiter((embed(x) for x in range(ddim)), dtype=np.int64)
    w = cols[data_rows, :]
    keep = np.zeros(1 << n, dtype=bool)
    keep[data_rows] = True
    leakage = float(np.max(np.abs(cols[~keep, :]))) if (1 << n) > ddim else 0.0
    if leakage > tol:
        return AncillaMatch(False, "leakage", 1.0 + 0j, float("inf"), leakage)
    pm = equiv_phase(w, data_unitary, tol)
    failure = None if pm.ok else "mismatch"
    return AncillaMatch(pm.ok, failure, pm.phase, pm.max_deviation, leakage)


def trace_fidelity(u: np.ndarray, v: np.ndarray) -> float:
    """|tr(U^dag V)| / dim, in [0, 1]."""
    if u.shape != v.shape:
        raise ValueError(f"shape mismatch: {u.shape} vs {v.shape}")
    return abs(np.trace(u.conj().T @ v)) / u.shape[0]
