"""Shared helpers: seeded random circuit/matrix generators and oracles."""

from __future__ import annotations

import math
import random

import numpy as np

from gmsforge.circuit import (Circuit, Exponential, PerPair, Uniform, cnot,
                              cp, gms, h, rx, ry, rz, xx)
from gmsforge.gf2 import Gf2Matrix


def random_gate(rng: random.Random, n: int):
    kind = rng.choice(["H", "RX", "RY", "RZ", "CNOT", "CP", "XX", "GMS"])
    theta = rng.uniform(-2 * math.pi, 2 * math.pi)
    if kind == "H":
        return h(rng.randrange(n))
    if kind in ("RX", "RY", "RZ"):
        return {"RX": rx, "RY": ry, "RZ": rz}[kind](rng.randrange(n), theta)
    a, b = rng.sample(range(n), 2)
    if kind == "CNOT":
        return cnot(a, b)
    if kind == "CP":
        return cp(a, b, theta)
    if kind == "XX":
        return xx(a, b, theta)
    size = rng.randint(2, n)
    qubits = sorted(rng.sample(range(n), size))
    style = rng.choice(["uniform", "per_pair", "exponential"])
    if style == "uniform":
        return gms(qubits, Uniform(theta))
    if style == "exponential":
        return gms(qubits, Exponential())
    table = tuple((qubits[i], qubits[j], rng.uniform(-math.pi, math.pi))
                  for i in range(size) for j in range(i + 1, size))
    return gms(qubits, PerPair(table))


def random_circuit(rng: random.Random, n: int, n_gates: int) -> Circuit:
    return Circuit(n, tuple(random_gate(rng, n) for _ in range(n_gates)))


def random_echo_circuit(rng: random.Random, n: int, n_gates: int) -> Circuit:
    """Random circuit seeded with spin-echo patterns the rewrite can fire on."""
    gates = []
    for _ in range(n_gates):
        if rng.random() < 0.4:
            a, b = rng.sample(range(n), 2)
            theta = rng.uniform(-math.pi, math.pi)
            echo_q = rng.choice([a, b])
            gates += [xx(a, b, theta), rz(echo_q, math.pi), xx(a, b, theta)]
        elif rng.random() < 0.3 and n >= 3:
            qs = sorted(rng.sample(range(n), 3))
            theta = rng.uniform(-math.pi, math.pi)
            gates += [gms(qs, Uniform(theta)), rz(rng.choice(qs), math.pi),
                      gms(qs, Uniform(theta))]
        else:
            gates.append(random_gate(rng, n))
    return Circuit(n, tuple(gates))


def random_invertible_gf2(rng: random.Random, n: int) -> Gf2Matrix:
    while True:
        rows = tuple(rng.randrange(1, 1 << n) for _ in range(n))
        m = Gf2Matrix(n, rows)
        if m.is_invertible():
            return m


def random_state(rng: np.random.Generator, n: int) -> np.ndarray:
    v = rng.normal(size=1 << n) + 1j * rng.normal(size=1 << n)
    return v / np.linalg.norm(v)


def kron_all(mats) -> np.ndarray:
    out = np.array([[1.0 + 0j]])
    for m in mats:
        out = np.kron(out, m)
    return out


I2 = np.eye(2, dtype=complex)
PAULI_X = np.array([[0, 1], [1, 0]], dtype=complex)
PAULI_Z = np.array([[1, 0], [0, -1]], dtype=complex)
HADAMARD = np.array([[1, 1], [1, -1]], dtype=complex) / math.sqrt(2)


def xx_matrix(chi: float) -> np.ndarray:
    c, s = math.cos(chi / 2), math.sin(chi / 2)
    return c * np.eye(4, dtype=complex) - 1j * s * np.kron(PAULI_X, PAULI_X)


def toffoli_matrix(n: int) -> np.ndarray:
    dim = 1 << n
    perm = list(range(dim - 2)) + [dim - 1, dim - 2]
    return np.eye(dim, dtype=complex)[:, perm]


def controlled_z_matrix(n: int) -> np.ndarray:
    d = np.eye(1 << n, dtype=complex)
    d[-1, -1] = -1
    return d
