import json

from gmsforge import cli
from gmsforge.circuit import deserialize
from gmsforge.constructions import fanout


def run(capsys, *argv):
    code = cli.main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def test_synth_fanout_matches_builder(capsys):
    code, out, _ = run(capsys, "synth", "fanout", "--n", "4")
    assert code == 0
    assert deserialize(out).gates == fanout(4).generated.gates


def test_synth_unknown_name_exit2(capsys):
    code, _, err = run(capsys, "synth", "definitely-not-a-thing")
    assert code == 2
    assert "fanout" in err  # lists valid names


def test_synth_deterministic(capsys):
    _, first, _ = run(capsys, "synth", "toffoli", "--n", "6")
    _, second, _ = run(capsys, "synth", "toffoli", "--n", "6")
    assert first == second


def test_synth_max_gms_only(capsys):
    code, out, _ = run(capsys, "synth", "fanout", "--n", "4", "--max-gms-only")
    circ = deserialize(out)
    assert code == 0
    assert all(len(g.qubits) == 4 for g in circ.gates if g.kind == "GMS")


def test_verify_pass(tmp_path, capsys):
    path = tmp_path / "f4.json"
    run(capsys, "synth", "fanout", "--n", "4", "--out", str(path))
    code, out, _ = run(capsys, "verify", str(path), "--against", "fanout", "--n", "4")
    assert code == 0 and out.startswith("PASS")


def test_verify_fail_exit1(tmp_path, capsys):
    path = tmp_path / "f4.json"
    run(capsys, "synth", "fanout", "--n", "4", "--out", str(path))
    code, out, _ = run(capsys, "verify", str(path), "--against", "fanin", "--n", "4")
    assert code == 1 and out.startswith("FAIL")


def test_verify_ancilla_contract(tmp_path, capsys):
    path = tmp_path / "t6.json"
    run(capsys, "synth", "toffoli", "--n", "6", "--out", str(path))
    code, out, _ = run(capsys, "verify", str(path), "--against", "toffoli", "--n", "6")
    assert code == 0 and out.startswith("PASS")


def test_verify_guard_exit3(tmp_path, capsys, monkeypatch):
    monkeypatch.delenv("GMSFORGE_MAX_DENSE_QUBITS", raising=False)
    path = tmp_path / "q13.json"
    run(capsys, "synth", "qft-gms", "--n", "13", "--out", str(path))
    code, _, err = run(capsys, "verify", str(path), "--against", "qft-ref", "--n", "13")
    assert code == 3 and "guard" in err


def test_verify_emit_unitary(tmp_path, capsys):
    path = tmp_path / "cx.json"
    run(capsys, "synth", "cnot-xx", "--out", str(path))
    dump = tmp_path / "u.csv"
    code, _, _ = run(capsys, "verify", str(path), "--against", "cnot-xx",
                     "--emit-unitary", str(dump))
    assert code == 0
    rows = dump.read_text().strip().split("\n")
    assert len(rows) == 4 and len(rows[0].split(",")) == 8  # re,im per entry


def test_verify_qft_roundtrip(tmp_path, capsys):
    # pulse-profile tables survive the JSON round trip through the CLI
    path = tmp_path / "q4.json"
    run(capsys, "synth", "qft-gms", "--n", "4", "--out", str(path))
    code, out, _ = run(capsys, "verify", str(path), "--against", "qft-ref", "--n", "4")
    assert code == 0 and out.startswith("PASS")


def test_count_by_name(capsys):
    code, out, _ = run(capsys, "count", "tdistill")
    assert code == 0 and "gms_pulses=10" in out and "qubits=15" in out


def test_count_from_file(tmp_path, capsys):
    path = tmp_path / "f5.json"
    run(capsys, "synth", "fanin", "--n", "5", "--out", str(path))
    code, out, _ = run(capsys, "count", str(path))
    assert code == 0 and "gms_pulses=2" in out


def test_count_json(capsys):
    code, out, _ = run(capsys, "count", "toffoli", "--n", "8", "--json")
    doc = json.loads(out)
    assert code == 0 and doc["gms_pulses"] == 15 and doc["qubits"] == 11


def test_table1_passes(capsys):
    code, out, _ = run(capsys, "table1")
    assert code == 0
    assert "FAIL" not in out
    assert "EXCLUDED" in out  # local adder cells stay out of scope


def test_table1_json_manifest(capsys):
    code, out, _ = run(capsys, "table1", "--json")
    doc = json.loads(out)
    assert code == 0 and doc["command"] == "table1"
    outcomes = {c["outcome"] for c in doc["checks"]}
    assert outcomes == {"PASS", "SKIPPED"}


def test_optimize_writes_scans(tmp_path, capsys):
    code, out, _ = run(capsys, "optimize-powerlaw", "--n", "10", "--m", "2",
                       "--out-dir", str(tmp_path))
    assert code == 0 and "fidelity=" in out
    for axis in ("b1", "b2", "p1", "p2"):
        lines = (tmp_path / f"scan_{axis}.csv").read_text().splitlines()
        assert lines[0] == "value,fidelity" and len(lines) > 10


def test_optimize_deterministic(tmp_path, capsys):
    _, a, _ = run(capsys, "optimize-powerlaw", "--n", "10", "--m", "1",
                  "--out-dir", str(tmp_path / "x"))
    _, b, _ = run(capsys, "optimize-powerlaw", "--n", "10", "--m", "1",
                  "--out-dir", str(tmp_path / "x"))
    assert a == b
    scans1 = (tmp_path / "x" / "scan_b1.csv").read_text()
    _, _, _ = run(capsys, "optimize-powerlaw", "--n", "10", "--m", "1",
                  "--out-dir", str(tmp_path / "y"))
    assert (tmp_path / "y" / "scan_b1.csv").read_text() == scans1


def test_fidelity_scan_stdout(capsys):
    code, out, _ = run(capsys, "fidelity-scan", "--axis", "p1", "--n", "10",
                       "--params", "0.4,-0.5,2.5,3.4")
    assert code == 0
    lines = out.splitlines()
    assert lines[0] == "value,fidelity"
    best = max(lines[1:], key=lambda ln: float(ln.split(",")[1]))
    assert abs(float(best.split(",")[0]) - 2.5) < 1e-9


def test_fidelity_scan_bad_axis(capsys):
    code, _, err = run(capsys, "fidelity-scan", "--axis", "q9", "--n", "10",
                       "--params", "0.4,2.5")
    assert code == 2 and "axis" in err


def test_schema_error_exit2(tmp_path, capsys):
    bad = tmp_path / "bad.json"
    bad.write_text('{"n_qubits": 2, "gates": [{"kind": "WAT", "qubits": []}]}')
    code, _, err = run(capsys, "verify", str(bad), "--against", "fanout", "--n", "2")
    assert code == 2 and "kind" in err


def test_synth_linear(tmp_path, capsys):
    m = tmp_path / "m.json"
    m.write_text("[[1,1,0],[0,1,0],[0,0,1]]")
    code, out, _ = run(capsys, "synth", "linear", "--matrix", str(m))
    circ = deserialize(out)
    assert code == 0 and circ.n_qubits == 3
    # one single-target fan: a dressed XX pulse
    assert sum(1 for g in circ.gates if g.kind in ("XX", "GMS")) == 1
