import json
import subprocess
import sys
from pathlib import Path

import pytest

from relcone.cli import JobSpec, dump, main, run
from relcone.cone import LinearCone

DATA = Path(__file__).resolve().parent.parent / "data"
CUSPS = str(DATA / "two_cusps.json")


def write(tmp_path, doc, name="in.json"):
    p = tmp_path / name
    p.write_text(json.dumps(doc))
    return str(p)


def branch(coords, label, **kw):
    return {"label": label, "coords": coords, **kw}


def test_cone_two_cusps(capsys):
    assert main(["cone", CUSPS]) == 0
    doc = json.loads(capsys.readouterr().out)
    cone = LinearCone.from_json(doc["cone"])
    assert len(cone.planes()) == 2
    provs = [p for s in doc["cone"]["subspaces"] for p in s["provenance"]]
    assert sorted(p["n_i"] for p in provs) == [6, 6]


def test_cone_output_is_byte_identical(tmp_path):
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    assert main(["cone", CUSPS, "-o", str(a), "--validate"]) == 0
    assert main(["cone", CUSPS, "-o", str(b), "--validate"]) == 0
    assert a.read_bytes() == b.read_bytes()


def test_cone_json_round_trip(capsys):
    main(["cone", CUSPS])
    doc = json.loads(capsys.readouterr().out)
    again = LinearCone.from_json(doc["cone"]).to_json()
    assert again == doc["cone"]
    assert dump(doc) == dump(json.loads(dump(doc)))


def test_smooth_self_pair(tmp_path, capsys):
    b = branch(["t", "t^2"], "s")
    assert main(["cone", write(tmp_path, {"X": [b], "Y": [b]})]) == 0
    doc = json.loads(capsys.readouterr().out)
    assert [s["dim"] for s in doc["cone"]["subspaces"]] == [1]


def test_truncation_starved_exit_3(capsys):
    assert main(["cone", CUSPS, "--trunc", "3"]) == 3
    err = json.loads(capsys.readouterr().err)
    assert err["error"] == "PrecisionExhausted" and "(X, Y)" in err["message"]


def test_field_extension_exit_4(tmp_path, capsys):
    doc = {"X": [branch(["2*t^2", "t^3"], "x")], "Y": [branch(["t^2", "t^5"], "y")]}
    assert main(["cone", write(tmp_path, doc)]) == 4
    err = json.loads(capsys.readouterr().err)
    assert err["error"] == "FieldExtensionRequired" and "x" in err["message"]


@pytest.mark.parametrize("doc", [
    {"X": [branch(["t^2", "t^^3"], "x")], "Y": [branch(["t", "0"], "y")]},
    {"Y": [branch(["t", "0"], "y")]},
    {"X": [branch(["1 + t", "t"], "x")], "Y": [branch(["t", "0"], "y")]},
    ["not", "an", "object"],
])
def test_input_errors_exit_2(tmp_path, doc, capsys):
    assert main(["cone", write(tmp_path, doc)]) == 2
    assert "error" in json.loads(capsys.readouterr().err)


def test_missing_file_exit_2(tmp_path):
    assert main(["cone", str(tmp_path / "nope.json")]) == 2


def test_oracle_command_and_exit_5(tmp_path, capsys):
    doc = json.loads(Path(CUSPS).read_text())
    doc["cone"] = {"dim": 3, "subspaces": [{"span": [["1", "0", "0"], ["0", "1", "1"]]}]}
    assert main(["oracle", write(tmp_path, doc)]) == 5
    out = json.loads(capsys.readouterr().out)
    assert out["oracle"][0]["passed"] is False
    doc["cone"]["subspaces"].append({"span": [["1", "0", "0"], ["0", "1", "-1"]]})
    assert main(["oracle", write(tmp_path, doc)]) == 0


def test_join_command(tmp_path, capsys):
    doc = {"mode": "XY", "points": [{"P": [1, 0, 0, 0], "chart": 0,
                                     "X": [branch(["t^2", "t^3", "0"], "X")],
                                     "Y": [branch(["t^2", "0", "t^3"], "Y")]}]}
    assert main(["join", write(tmp_path, doc)]) == 0
    rep = json.loads(capsys.readouterr().out)["report"]
    comps = rep["points"][0]["components"]
    assert [c["theorem_case"] for c in comps] == ["(ii)(2)", "(ii)(2)"]


def test_normalize_command(tmp_path, capsys):
    doc = {"X": [branch(["t^2 + t^3", "t^5"], "x")], "Y": [branch(["t^2", "t^7"], "y")]}
    assert main(["normalize", write(tmp_path, doc), "--trunc", "12"]) == 0
    pair = json.loads(capsys.readouterr().out)["pairs"][0]
    assert pair["kind"] == "shared_tangent" and pair["x"]["coords"][0] == "t^2"


def test_text_format(capsys):
    assert main(["cone", CUSPS, "--format", "text", "--validate"]) == 0
    out = capsys.readouterr().out
    assert out.startswith("cone in C^3: 2 component(s)")
    assert "eps=-1 n=6" in out and "PASS" in out


def test_run_restores_conductor_cap():
    from relcone import cyclo
    before = cyclo.set_max_conductor(240)
    cyclo.set_max_conductor(before)
    status, _ = run(JobSpec("cone", CUSPS, max_conductor=12))
    assert status == 0
    assert cyclo.set_max_conductor(before) == before


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "relcone", "cone", CUSPS, "--format", "text"],
                          capture_output=True, text=True)
    assert proc.returncode == 0 and "2 component(s)" in proc.stdout
