import math
import random

import numpy as np
import pytest

from conftest import random_circuit
from gmsforge.circuit import (Circuit, Exponential, Gate, PerPair,
                              PowerLawSum, SchemaError, Uniform, cnot,
                              deserialize, empty, gms, h, rx, serialize, xx)
from gmsforge.constructions import fanout, toffoli3_gms, toffoli_n
from gmsforge.sim import unitary_of

PI = math.pi


def test_append_single_gate():
    c = empty(2).append(h(0))
    assert len(c.gates) == 1 and c.gates[0].kind == "H"


def test_append_preserves_order():
    base = empty(2)
    built = base
    target = fanout(2).generated
    for g in target.gates:
        built = built.append(g)
    assert built.gates == target.gates


def test_append_out_of_range():
    with pytest.raises(ValueError):
        empty(3).append(h(5))


def test_compose_identity_element():
    c = fanout(3).generated
    assert c.compose(empty(3)).gates == c.gates


def test_compose_with_inverse_is_identity():
    c = fanout(4).generated
    u = unitary_of(c.compose(c.inverse()))
    assert np.max(np.abs(u - np.eye(16))) < 1e-10


def test_compose_width_mismatch():
    with pytest.raises(ValueError):
        empty(3).compose(empty(4))


def test_inverse_cancels_random_circuits():
    rng = random.Random(19)
    for _ in range(20):
        c = random_circuit(rng, 4, 10)
        u = unitary_of(c.inverse()) @ unitary_of(c)
        assert np.max(np.abs(u - np.eye(16))) < 1e-10


def test_inverse_h_self():
    assert h(0).inverse() == h(0)


def test_inverse_xx_negates():
    assert xx(0, 1, 0.7).inverse() == xx(0, 1, -0.7)


def test_inverse_gms_simulates_to_conjugate_transpose():
    c = Circuit(3, (gms((0, 1, 2), Uniform(PI / 2)),))
    u = unitary_of(c)
    v = unitary_of(c.inverse())
    assert np.max(np.abs(v - u.conj().T)) < 1e-12


def test_inverse_involution_on_gate_lists():
    rng = random.Random(7)
    for _ in range(20):
        c = random_circuit(rng, 4, 12)
        # exponential profiles invert to explicit tables, so compare those
        # circuits semantically instead
        if any(g.kind == "GMS" and isinstance(g.profile, Exponential)
               for g in c.gates):
            u = unitary_of(c)
            v = unitary_of(c.inverse().inverse())
            assert np.max(np.abs(u - v)) < 1e-10
        else:
            assert c.inverse().inverse().gates == c.gates


def test_expand_gms_single_pair():
    c = Circuit(2, (gms((0, 1), Uniform(0.3)),)).expand_gms()
    assert c.gates == (xx(0, 1, 0.3),)


def test_expand_gms4_six_xx_same_unitary():
    c = Circuit(4, (gms(range(4), Uniform(0.9)),))
    expanded = c.expand_gms()
    assert sum(1 for g in expanded.gates if g.kind == "XX") == 6
    assert np.max(np.abs(unitary_of(c) - unitary_of(expanded))) < 1e-12


def test_expand_gms_pair_order_free():
    # XX factors commute: any pair ordering gives the same unitary
    rng = random.Random(3)
    c = Circuit(4, (gms(range(4), Uniform(1.1)),))
    base = unitary_of(c.expand_gms())
    pairs = list(c.expand_gms().gates)
    for _ in range(5):
        rng.shuffle(pairs)
        u = unitary_of(Circuit(4, tuple(pairs)))
        assert np.max(np.abs(u - base)) < 1e-12


def test_expand_gms_exponential_angles():
    c = Circuit(3, (gms((0, 1, 2), Exponential()),)).expand_gms()
    angles = {(g.qubits[0], g.qubits[1]): g.theta for g in c.gates}
    assert angles == {(0, 1): PI / 2, (0, 2): PI / 4, (1, 2): PI / 2}


def test_expand_gms_power_law_angles():
    prof = PowerLawSum(((0.5, 2.0), (-0.25, 1.0)), offset=1)
    c = Circuit(3, (gms((0, 2), prof),)).expand_gms()
    want = PI / (0.5 * 3.0**2) + PI / (-0.25 * 3.0)  # distance 2, offset 1
    assert c.gates[0] == xx(0, 2, want)


def test_gms_uniform_zero_is_identity():
    u = unitary_of(Circuit(3, (gms((0, 1, 2), Uniform(0.0)),)))
    assert np.max(np.abs(u - np.eye(8))) < 1e-12


def test_cost_fanout4():
    assert fanout(4).generated.cost().gms_pulses == 2


def test_cost_toffoli4():
    report = toffoli_n(4).generated.cost()
    assert (report.gms_pulses, report.qubits, report.ancillas) == (3, 5, 1)


def test_cost_empty():
    report = empty(2).cost()
    assert report.gms_pulses == 0 and report.local_entangling == 0
    assert report.single_qubit == 0 and report.entangling == 0


def test_cost_additive_under_compose():
    rng = random.Random(11)
    a = random_circuit(rng, 4, 9)
    b = random_circuit(rng, 4, 7)
    ca, cb, cc = a.cost(), b.cost(), a.compose(b).cost()
    assert cc.gms_pulses == ca.gms_pulses + cb.gms_pulses
    assert cc.local_entangling == ca.local_entangling + cb.local_entangling
    assert cc.single_qubit == ca.single_qubit + cb.single_qubit
    assert cc.qubits == 4


def test_gate_validation():
    with pytest.raises(ValueError):
        cnot(1, 1)
    with pytest.raises(ValueError):
        gms((0,), Uniform(1.0))
    with pytest.raises(ValueError):
        rx(0, float("nan"))
    with pytest.raises(ValueError):
        gms((0, 1, 2), PerPair(((0, 1, 0.5),)))  # missing pairs
    with pytest.raises(ValueError):
        Gate("XX", (0, 1, 2), 0.5)  # wrong arity
    with pytest.raises(SchemaError):
        deserialize('{"n_qubits": 3, "gates": '
                    '[{"kind": "CNOT", "qubits": [0, 1, 2]}]}')


def test_ancilla_validation():
    with pytest.raises(ValueError):
        Circuit(3, (), frozenset({3}))


# -- serialization ----------------------------------------------------------

def test_roundtrip_toffoli3():
    c = toffoli3_gms().generated
    assert deserialize(serialize(c)).gates == c.gates


def test_roundtrip_empty():
    c = empty(4, ancillas=(3,))
    back = deserialize(serialize(c))
    assert back.n_qubits == 4 and back.ancillas == frozenset({3})
    assert back.gates == ()


def test_roundtrip_exact_angles():
    rng = random.Random(5)
    c = random_circuit(rng, 5, 40)
    back = deserialize(serialize(c))
    for g, g2 in zip(c.gates, back.gates):
        assert g == g2  # bitwise angle equality via repr round-trip


def test_roundtrip_all_profiles():
    c = Circuit(4, (
        gms((0, 1), Uniform(0.1)),
        gms((0, 2, 3), Exponential()),
        gms((1, 2), PerPair(((1, 2, -0.25),))),
        gms((0, 1, 2, 3), PowerLawSum(((0.4, 2.5), (-0.5, 3.4)), 1)),
    ))
    assert deserialize(serialize(c)).gates == c.gates


def test_malformed_profile_kind_names_field():
    text = """{"n_qubits": 2, "ancillas": [], "gates": [
        {"kind": "GMS", "qubits": [0, 1], "profile": {"kind": "bogus"}}]}"""
    with pytest.raises(SchemaError) as err:
        deserialize(text)
    assert "gates[0].profile.kind" in str(err.value)


def test_malformed_json_reports_line():
    with pytest.raises(SchemaError) as err:
        deserialize("{nope}")
    assert "line" in str(err.value)


def test_missing_theta_reports_field():
    text = '{"n_qubits": 1, "ancillas": [], "gates": [{"kind": "RX", "qubits": [0]}]}'
    with pytest.raises(SchemaError) as err:
        deserialize(text)
    assert "gates[0].theta" in str(err.value)
