"""Gate-level IR for circuits over global Molmer-Sorensen (GMS) pulses.

Gate set: addressable single-qubit rotations RX/RY/RZ, Hadamard, CNOT,
controlled-phase, the two-qubit Ising coupling XX, and a GMS gate acting on
an arbitrary subset of qubits with a configurable coupling profile.  An
explicit global-phase gate keeps circuit identities exact rather than
"up to a phase".

Conventions fixed here and relied on everywhere else:

* Angles are radians in double precision.  Rotations are 4*pi periodic at
  the unitary level (2*pi up to global phase); no normalization is applied.
* RX(t) = exp(-i*sigma_x*t/2); RY and RZ analogous.
* XX(chi) = exp(-i*(sigma_x (x) sigma_x)*chi/2).  A GMS over a qubit set S
  applies XX to every pair of S, pair (i, j) at angle profile.angle(i, j).
* Circuits are immutable values; every operation returns a new circuit.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from typing import Iterable, Iterator, Union


class SchemaError(ValueError):
    """Raised on malformed circuit JSON; carries the offending field path."""

    def __init__(self, path: str, message: str):
        self.path = path
        super().__init__(f"{path}: {message}")


# ---------------------------------------------------------------------------
# Coupling profiles
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Uniform:
    """Every pair of the participating set couples at the same angle."""

    theta: float

    def angle(self, i: int, j: int) -> float:
        return self.theta

    def negated(self) -> "Uniform":
        return Uniform(-self.theta)


@dataclass(frozen=True)
class PerPair:
    """Explicit symmetric pair table; must cover every pair of the set."""

    table: tuple[tuple[int, int, float], ...]

    def __post_init__(self):
        canon = tuple(sorted((min(i, j), max(i, j), float(chi)) for i, j, chi in self.table))
        keys = [(i, j) for i, j, _ in canon]
        if len(set(keys)) != len(keys):
            raise ValueError("duplicate pair in coupling table")
        object.__setattr__(self, "table", canon)

    def angle(self, i: int, j: int) -> float:
        key = (min(i, j), max(i, j))
        for a, b, chi in self.table:
            if (a, b) == key:
                return chi
        raise ValueError(f"pair {key} not in coupling table")

    def negated(self) -> "PerPair":
        return PerPair(tuple((i, j, -chi) for i, j, chi in self.table))


@dataclass(frozen=True)
class Exponential:
    """Coupling falling off exponentially in wire distance: pi / 2**|i-j|."""

    def angle(self, i: int, j: int) -> float:
        return math.pi / 2 ** abs(i - j)

    def negated(self) -> "PerPair":
        # The exponential kind fixes the +pi numerator, so its inverse is
        # only expressible as an explicit table; built lazily by the gate.
        raise NotImplementedError("negate via Gate context (needs the qubit set)")


@dataclass(frozen=True)
class PowerLawSum:
    """Sum of power-law drop-offs: chi_ij = sum_t pi / (b_t * (|i-j|+offset)**p_t)."""

    terms: tuple[tuple[float, float], ...]
    offset: int = 0

    def __post_init__(self):
        if self.offset not in (0, 1):
            raise ValueError("offset must be 0 or 1")
        terms = tuple((float(b), float(p)) for b, p in self.terms)
        if any(b == 0.0 for b, _ in terms):
            raise ValueError("power-law coefficient b must be nonzero")
        object.__setattr__(self, "terms", terms)

    def angle(self, i: int, j: int) -> float:
        d = abs(i - j) + self.offset
        return sum(math.pi / (b * d**p) for b, p in self.terms)


CouplingProfile = Union[Uniform, PerPair, Exponential, PowerLawSum]


# ---------------------------------------------------------------------------
# Gates
# ---------------------------------------------------------------------------

GATE_KINDS = ("H", "RX", "RY", "RZ", "CNOT", "CP", "XX", "GMS", "PHASE")
_PARAMETRIC = ("RX", "RY", "RZ", "CP", "XX", "PHASE")


@dataclass(frozen=True)
class Gate:
    kind: str
    qubits: tuple[int, ...]
    theta: float | None = None
    profile: CouplingProfile | None = None

    _ARITY = {"H": 1, "RX": 1, "RY": 1, "RZ": 1,
              "CNOT": 2, "CP": 2, "XX": 2, "PHASE": 0}

    def __post_init__(self):
        if self.kind not in GATE_KINDS:
            raise ValueError(f"unknown gate kind {self.kind!r}")
        if len(set(self.qubits)) != len(self.qubits):
            raise ValueError("gate qubits must be distinct")
        if any(q < 0 for q in self.qubits):
            raise ValueError("negative qubit index")
        want = self._ARITY.get(self.kind)
        if want is not None and len(self.qubits) != want:
            raise ValueError(f"{self.kind} takes {want} qubit(s), "
                             f"got {len(self.qubits)}")
        if self.theta is not None and not math.isfinite(self.theta):
            raise ValueError("angle must be finite")
        if self.kind in _PARAMETRIC and self.theta is None:
            raise ValueError(f"{self.kind} requires an angle")
        if self.kind == "GMS":
            if len(self.qubits) < 2:
                raise ValueError("GMS needs at least 2 participating qubits")
            if self.profile is None:
                raise ValueError("GMS requires a coupling profile")
            if isinstance(self.profile, PerPair):
                want = {(min(a, b), max(a, b)) for a, b in _pairs(self.qubits)}
                have = {(i, j) for i, j, _ in self.profile.table}
                if want != have:
                    raise ValueError("per-pair table must cover exactly the participating pairs")

    def pair_angles(self) -> list[tuple[int, int, float]]:
        """XX decomposition of a GMS gate: (i, j, chi) for every pair, i < j."""
        if self.kind != "GMS":
            raise ValueError("pair_angles is defined for GMS gates only")
        return [(i, j, self.profile.angle(i, j)) for i, j in _pairs(self.qubits)]

    def inverse(self) -> "Gate":
        if self.kind in ("H", "CNOT"):
            return self
        if self.kind in _PARAMETRIC:
            return Gate(self.kind, self.qubits, -self.theta)
        # GMS: negate every coupling
        prof = self.profile
        if isinstance(prof, (Uniform, PerPair)):
            return Gate("GMS", self.qubits, profile=prof.negated())
        return Gate("GMS", self.qubits,
                    profile=PerPair(tuple((i, j, -chi) for i, j, chi in self.pair_angles())))


def _pairs(qubits: Iterable[int]) -> Iterator[tuple[int, int]]:
    qs = sorted(qubits)
    for a in range(len(qs)):
        for b in range(a + 1, len(qs)):
            yield qs[a], qs[b]


def h(q: int) -> Gate:
    return Gate("H", (q,))


def rx(q: int, theta: float) -> Gate:
    return Gate("RX", (q,), theta)


def ry(q: int, theta: float) -> Gate:
    return Gate("RY", (q,), theta)


def rz(q: int, theta: float) -> Gate:
    return Gate("RZ", (q,), theta)


def cnot(control: int, target: int) -> Gate:
    return Gate("CNOT", (control, target))


def cp(q1: int, q2: int, theta: float) -> Gate:
    """Diagonal phase exp(i*theta) on the |11> component of the pair."""
    return Gate("CP", (q1, q2), theta)


def xx(q1: int, q2: int, chi: float) -> Gate:
    return Gate("XX", (q1, q2), chi)


def gms(qubits: Iterable[int], profile: CouplingProfile) -> Gate:
    return Gate("GMS", tuple(sorted(qubits)), profile=profile)


def global_phase(theta: float) -> Gate:
    """Scalar factor exp(i*theta); bookkeeping gate acting on no qubits."""
    return Gate("PHASE", (), theta)


# ---------------------------------------------------------------------------
# Circuits
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Circuit:
    """Ordered gate sequence over an indexed register.

    ``ancillas`` marks qubits expected to enter and leave in |0>; the
    remaining qubits are the data register.
    """

    n_qubits: int
    gates: tuple[Gate, ...] = ()
    ancillas: frozenset[int] = field(default_factory=frozenset)

    def __post_init__(self):
        if self.n_qubits <= 0:
            raise ValueError("circuit needs at least one qubit")
        object.__setattr__(self, "gates", tuple(self.gates))
        object.__setattr__(self, "ancillas", frozenset(self.ancillas))
        if any(a < 0 or a >= self.n_qubits for a in self.ancillas):
            raise ValueError("ancilla index out of range")
        for g in self.gates:
            self._check(g)

    def _check(self, gate: Gate) -> None:
        if any(q >= self.n_qubits for q in gate.qubits):
            raise ValueError(
                f"gate {gate.kind} on {gate.qubits} exceeds register of {self.n_qubits}")

    @property
    def data_qubits(self) -> tuple[int, ...]:
        return tuple(q for q in range(self.n_qubits) if q not in self.ancillas)

    def append(self, gate: Gate) -> "Circuit":
        self._check(gate)
        return Circuit(self.n_qubits, self.gates + (gate,), self.ancillas)

    def extend(self, gates: Iterable[Gate]) -> "Circuit":
        return Circuit(self.n_qubits, self.gates + tuple(gates), self.ancillas)

    def compose(self, other: "Circuit") -> "Circuit":
        """Gates of self followed by gates of other (unitary U_other * U_self)."""
        if other.n_qubits != self.n_qubits:
            raise ValueError(
                f"width mismatch: {self.n_qubits} vs {other.n_qubits}")
        return Circuit(self.n_qubits, self.gates + other.gates,
                       self.ancillas | other.ancillas)

    def inverse(self) -> "Circuit":
        return Circuit(self.n_qubits,
                       tuple(g.inverse() for g in reversed(self.gates)),
                       self.ancillas)

    def expand_gms(self) -> "Circuit":
        """Replace every GMS by its XX pair list (pairs commute, order free)."""
        out: list[Gate] = []
        for g in self.gates:
            if g.kind == "GMS":
                out.extend(xx(i, j, chi) for i, j, chi in g.pair_angles())
            else:
                out.append(g)
        return Circuit(self.n_qubits, tuple(out), self.ancillas)

    def cost(self) -> "CostReport":
        gms_by_size: dict[int, int] = {}
        local = single = 0
        for g in self.gates:
            if g.kind == "GMS":
                k = len(g.qubits)
                gms_by_size[k] = gms_by_size.get(k, 0) + 1
            elif g.kind in ("XX", "CNOT", "CP"):
                local += 1
            elif g.kind != "PHASE":
                single += 1
        return CostReport(
            gms_pulses=sum(gms_by_size.values()),
            gms_by_size=dict(sorted(gms_by_size.items())),
            local_entangling=local,
            single_qubit=single,
            qubits=self.n_qubits,
            ancillas=len(self.ancillas),
        )


@dataclass(frozen=True)
class CostReport:
    """Entangling-pulse tally. Global-phase bookkeeping gates are not counted."""

    gms_pulses: int
    gms_by_size: dict[int, int]
    local_entangling: int
    single_qubit: int
    qubits: int
    ancillas: int

    @property
    def entangling(self) -> int:
        return self.gms_pulses + self.local_entangling

    def as_dict(self) -> dict:
        return {
            "gms_pulses": self.gms_pulses,
            "gms_by_size": {str(k): v for k, v in self.gms_by_size.items()},
            "local_entangling": self.local_entangling,
            "single_qubit": self.single_qubit,
            "qubits": self.qubits,
            "ancillas": self.ancillas,
        }


def empty(n_qubits: int, ancillas: Iterable[int] = ()) -> Circuit:
    return Circuit(n_qubits, (), frozenset(ancillas))


# ---------------------------------------------------------------------------
# JSON interchange
# ---------------------------------------------------------------------------
#
# {"n_qubits": int, "ancillas": [int], "gates": [
#     {"kind": "H|RX|RY|RZ|CNOT|CP|XX|GMS|PHASE", "qubits": [int],
#      "theta": float?, "profile": {...}?}]}
#
# Profiles: {"kind": "uniform", "theta": f} | {"kind": "per_pair",
# "table": [[i, j, chi], ...]} | {"kind": "exponential"} |
# {"kind": "power_law", "terms": [[b, p], ...], "offset": 0|1}.
# Floats round-trip exactly (json uses repr).

def _profile_to_obj(profile: CouplingProfile) -> dict:
    if isinstance(profile, Uniform):
        return {"kind": "uniform", "theta": profile.theta}
    if isinstance(profile, PerPair):
        return {"kind": "per_pair", "table": [[i, j, chi] for i, j, chi in profile.table]}
    if isinstance(profile, Exponential):
        return {"kind": "exponential"}
    if isinstance(profile, PowerLawSum):
        return {"kind": "power_law", "terms": [[b, p] for b, p in profile.terms],
                "offset": profile.offset}
    raise TypeError(f"unknown profile {profile!r}")


def _profile_from_obj(obj, path: str) -> CouplingProfile:
    if not isinstance(obj, dict):
        raise SchemaError(path, "profile must be an object")
    kind = obj.get("kind")
    try:
        if kind == "uniform":
            return Uniform(_number(obj, "theta", path))
        if kind == "per_pair":
            table = obj.get("table")
            if not isinstance(table, list):
                raise SchemaError(f"{path}.table", "expected a list of [i, j, chi]")
            return PerPair(tuple((int(i), int(j), float(chi)) for i, j, chi in table))
        if kind == "exponential":
            return Exponential()
        if kind == "power_law":
            terms = obj.get("terms")
            if not isinstance(terms, list):
                raise SchemaError(f"{path}.terms", "expected a list of [b, p]")
            return PowerLawSum(tuple((float(b), float(p)) for b, p in terms),
                               int(obj.get("offset", 0)))
    except SchemaError:
        raise
    except (TypeError, ValueError) as exc:
        raise SchemaError(path, str(exc)) from exc
    raise SchemaError(f"{path}.kind", f"unknown profile kind {kind!r}")


def _number(obj: dict, key: str, path: str) -> float:
    val = obj.get(key)
    if not isinstance(val, (int, float)) or isinstance(val, bool):
        raise SchemaError(f"{path}.{key}", "expected a number")
    return float(val)


def serialize(circuit: Circuit) -> str:
    gates = []
    for g in circuit.gates:
        entry: dict = {"kind": g.kind, "qubits": list(g.qubits)}
        if g.theta is not None:
            entry["theta"] = g.theta
        if g.profile is not None:
            entry["profile"] = _profile_to_obj(g.profile)
        gates.append(entry)
    doc = {"n_qubits": circuit.n_qubits,
           "ancillas": sorted(circuit.ancillas),
           "gates": gates}
    return json.dumps(doc, indent=2)


def deserialize(text: str) -> Circuit:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise SchemaError(f"line {exc.lineno}", exc.msg) from exc
    if not isinstance(doc, dict):
        raise SchemaError("$", "top level must be an object")
    n = doc.get("n_qubits")
    if not isinstance(n, int) or n <= 0:
        raise SchemaError("n_qubits", "expected a positive integer")
    anc = doc.get("ancillas", [])
    if not isinstance(anc, list) or not all(isinstance(a, int) for a in anc):
        raise SchemaError("ancillas", "expected a list of integers")
    raw_gates = doc.get("gates", [])
    if not isinstance(raw_gates, list):
        raise SchemaError("gates", "expected a list")
    gates: list[Gate] = []
    for idx, obj in enumerate(raw_gates):
        path = f"gates[{idx}]"
        if not isinstance(obj, dict):
            raise SchemaError(path, "gate must be an object")
        kind = obj.get("kind")
        if kind not in GATE_KINDS:
            raise SchemaError(f"{path}.kind", f"unknown gate kind {kind!r}")
        qubits = obj.get("qubits", [])
        if not isinstance(qubits, list) or not all(isinstance(q, int) for q in qubits):
            raise SchemaError(f"{path}.qubits", "expected a list of integers")
        theta = None
        if kind in _PARAMETRIC:
            theta = _number(obj, "theta", path)
        profile = None
        if kind == "GMS":
            if "profile" not in obj:
                raise SchemaError(f"{path}.profile", "GMS gate requires a profile")
            profile = _profile_from_obj(obj["profile"], f"{path}.profile")
        try:
            gates.append(Gate(kind, tuple(qubits), theta, profile))
        except ValueError as exc:
            raise SchemaError(path, str(exc)) from exc
    try:
        return Circuit(n, tuple(gates), frozenset(anc))
    except ValueError as exc:
        raise SchemaError("$", str(exc)) from exc
