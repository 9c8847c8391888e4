import json
import math
from pathlib import Path

import jsonschema
import pytest
from click.testing import CliRunner

from helpers import code412_state
from magic_entropy.cli import main
from magic_entropy.entropy import entanglement_report
from magic_entropy.inputs import StabsumParseError, parse_amplitude, parse_region, parse_stabsum
from magic_entropy.report import document_to_report, dumps, load_schema, loads, report_to_document

INPUTS = Path(__file__).resolve().parent.parent / "inputs"
LN2 = 0.6931471805599453


def invoke(*args):
    return CliRunner().invoke(main, [str(a) for a in args])


def doc_of(result):
    assert result.exit_code == 0, result.output
    doc = json.loads(result.output)
    jsonschema.validate(doc, load_schema())
    return doc


def test_document_round_trip_and_schema():
    psi = code412_state(math.cos(0.3), math.sin(0.3))
    rep = entanglement_report(psi, [0, 1], renyi=(0.5, 2.0, 3.0, math.inf))
    doc = report_to_document(rep, "bits", "ab" * 32, 7, {"region": "0,1"})
    jsonschema.validate(doc, load_schema())
    text = dumps(doc)
    again = loads(text)
    assert again == doc
    back = document_to_report(again)
    assert back.von_neumann_bits == rep.von_neumann_bits
    assert back.renyi_bits == rep.renyi_bits
    assert back.spectrum == rep.spectrum
    assert back.area_bits == rep.area_bits


def test_nats_scaling_and_round_trip():
    rep = entanglement_report(code412_state(0.6, 0.8), [0, 1])
    b = report_to_document(rep, "bits")
    n = report_to_document(rep, "nats")
    jsonschema.validate(n, load_schema())
    assert n["von_neumann"] == b["von_neumann"] * LN2
    assert n["area"] == b["area"] * LN2 and n["area_bits"] == b["area_bits"]
    for k in b["renyi"]:
        assert n["renyi"][k] == b["renyi"][k] * LN2
    back = document_to_report(loads(dumps(n)))
    assert abs(back.von_neumann_bits - rep.von_neumann_bits) < 1e-15


def test_seventeen_digit_floats():
    text = dumps({"a": 0.1, "b": 1.0, "c": [2.0 / 3.0, 1]})
    assert "0.10000000000000001" in text and "0.66666666666666663" in text and '"b": 1.0' in text
    with pytest.raises(ValueError):
        dumps({"x": float("nan")})


def test_amplitude_and_region_parsing():
    assert parse_amplitude("0.5") == 0.5
    assert parse_amplitude("0.5-0.25i") == complex(0.5, -0.25)
    assert parse_amplitude("-i") == -1j
    assert parse_amplitude("1e-3+2E-1i") == complex(1e-3, 0.2)
    with pytest.raises(ValueError):
        parse_amplitude("abc")
    assert parse_region("0,2-4,3") == (0, 2, 3, 4)
    assert parse_region("") == ()
    for bad in ("4-2", "x", "1,,2"):
        with pytest.raises(ValueError):
            parse_region(bad)
    with pytest.raises(ValueError):
        parse_region("0-5", 4)


@pytest.mark.parametrize("text", [
    "branch 1\nZ",
    "qubits 2\nZZ IZ",
    "qubits 2\nbranch 1 ZZ",
    "qubits 2\nbranch 1 ZI XI",
    "qubits 2\nbranch 1 ZZZ IZ",
    "qubits 2\nbranch q ZZ IZ",
    "qubits 2\nbranch 1 ZZ IZ\nbranch -1 ZZ IZ",
])
def test_stabsum_errors(text):
    with pytest.raises(StabsumParseError):
        parse_stabsum(text)


def test_stabsum_is_normalized():
    psi = parse_stabsum("qubits 1\nbranch 3 Z\nbranch 4i\n  -Z")
    assert abs(psi.norm_squared() - 1) < 1e-15


def test_entropy_command_examples():
    doc = doc_of(invoke("entropy", INPUTS / "code412.circ", "--region", "0,1"))
    assert doc["von_neumann"] == 2.0 and doc["units"] == "bits"
    doc = doc_of(invoke("entropy", INPUTS / "bell.circ", "--region", "0"))
    assert doc["von_neumann"] == 1.0
    doc = doc_of(invoke("entropy", INPUTS / "ghz4.circ", "--region", "0-3"))
    assert doc["von_neumann"] == 0.0 and doc["spectrum"][0] == [1.0, 1]
    doc = doc_of(invoke("entropy", INPUTS / "code412.stabsum", "--region", "0,1"))
    assert doc["von_neumann"] == 2.0 and len(doc["provenance"]["input_sha256"]) == 64
    nats = doc_of(invoke("entropy", INPUTS / "code412.stabsum", "--region", "0,1", "--units", "nats"))
    assert nats["von_neumann"] == 2.0 * LN2
    table = invoke("entropy", INPUTS / "bell.circ", "--region", "0", "--format", "table")
    assert table.exit_code == 0 and "von Neumann" in table.output


def test_stabilizers_command_examples():
    r = invoke("stabilizers", INPUTS / "ghz4.circ")
    assert r.exit_code == 0
    lines = r.output.strip().splitlines()
    assert len(lines) == 5 and lines[-1] == "nullity 0"
    r = invoke("stabilizers", INPUTS / "t_plus.circ", "--json")
    assert json.loads(r.output) == {"n": 1, "nullity": 1, "generators": []}
    r = invoke("stabilizers", INPUTS / "code412_generic.stabsum", "--json")
    out = json.loads(r.output)
    assert out["nullity"] == 1 and sorted(g[1:] for g in out["generators"]) == ["IZIZ", "XXXX", "ZIZI"]
    r = invoke("stabilizers", INPUTS / "code412_generic.stabsum", "--oracle", "--json")
    assert json.loads(r.output) == out


def test_verify_command(tmp_path):
    r = invoke("verify", INPUTS / "doped8.circ", "--region", "0-3", "--seed", "3")
    assert r.exit_code == 0 and r.output.strip().endswith("PASS")
    big = tmp_path / "big.circ"
    big.write_text("qubits 20\n" + "".join(f"H {q}\n" for q in range(20)))
    r = invoke("verify", big, "--region", "0-9")
    assert r.exit_code == 2 and "oracle" in r.output.lower() + (r.stderr if r.stderr_bytes else "")
    bad = tmp_path / "bad.circ"
    bad.write_text("qubits 2\nH 0\nCX 0 7\n")
    r = invoke("verify", bad, "--region", "0")
    assert r.exit_code == 2 and "line 3" in r.output


def test_learn_command():
    doc = doc_of(invoke("learn", INPUTS / "code412_generic.stabsum", "--region", "0,1", "--shots", "2000",
                        "--seed", "1"))
    exact = doc_of(invoke("entropy", INPUTS / "code412_generic.stabsum", "--region", "0,1"))
    assert doc["diagnostics"]["exact_group_match"] is True
    assert doc["von_neumann"] == exact["von_neumann"]
    assert doc["diagnostics"]["shots"] == 2000


def test_exit_codes(tmp_path):
    assert invoke("entropy", tmp_path / "missing.circ", "--region", "0").exit_code == 2
    assert invoke("entropy", INPUTS / "bell.circ", "--region", "5").exit_code == 2
    assert invoke("entropy", INPUTS / "bell.circ", "--region", "0", "--renyi", "-1").exit_code == 2
    zero = tmp_path / "zero.circ"
    zero.write_text("qubits 1\nMZ 0 -\n")
    assert invoke("entropy", zero, "--region", "0").exit_code == 2
    many = tmp_path / "many.circ"
    many.write_text("qubits 6\n" + "".join(f"H {q}\nT {q}\n" for q in range(6)))
    assert invoke("entropy", many, "--region", "0-2", "--budget", "8").exit_code == 3
    assert invoke("entropy", many, "--region", "0-2", "--max-logical-qubits", "3").exit_code == 3
    assert invoke("stabilizers", many, "--method", "truth_vector", "--candidates", "4").exit_code == 3
