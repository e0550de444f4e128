import json
import subprocess
import sys
from importlib import resources

import pytest

from skewquiver.cli import main, parse_field
from skewquiver.errors import ParseError
from skewquiver.exactfield import FieldSpec

DATA = resources.files("skewquiver").joinpath("data")


def data(name):
    return str(DATA.joinpath(name))


def run(capsys, *argv):
    code = main(["--backend", "python", *argv, "--json"] if argv[0] != "--backend" else [*argv, "--json"])
    return code, json.loads(capsys.readouterr().out)


def test_parse_field():
    assert parse_field("101") == FieldSpec(101)
    assert parse_field("3,2,1,0,1") == FieldSpec(3, 2, (1, 0, 1))
    with pytest.raises(ParseError):
        parse_field("x")


def test_report_schema(capsys):
    code, rep = run(capsys, "period", data("a3_L-1.json"))
    assert code == 0
    assert set(rep) == {"command", "field", "seed", "results", "failures"}
    assert rep["results"] == [{"m": 2, "n": 2}]


def test_twist(capsys):
    code, rep = run(capsys, "twist", data("a3_L-10.json"))
    want = json.loads(DATA.joinpath("a3_L01.json").read_text())
    assert code == 0 and rep["results"][0]["representation"] == want


def test_classify_and_identify(capsys, tmp_path):
    code, rep = run(capsys, "classify", data("a3_L101.json"))
    assert code == 0 and rep["results"][0]["classes"] == 2
    mod = rep["results"][2]["module"]
    mod.pop("violations")
    path = tmp_path / "m.json"
    path.write_text(json.dumps(mod))
    code, rep = run(capsys, "identify", str(path), data("a3_L101.json"))
    assert code == 0 and rep["results"] == [{"index": 2}]


def test_induce_modes(capsys, tmp_path):
    for mode in ("canonical", "subgroup", "path"):
        code, rep = run(capsys, "induce", data("a3_L-1.json"), "--mode", mode)
        assert code == 0 and rep["results"][0]["module"]["violations"] == []


def test_decompose(capsys):
    code, rep = run(capsys, "decompose", data("a3_L101.json"))
    assert code == 0 and len(rep["results"]) == 1
    assert rep["results"][0]["certificate"]["deterministic"]


def test_validate_reports_violation(capsys, tmp_path):
    bad = json.loads(DATA.joinpath("a3_L0.json").read_text())
    bad["sigma"] = {"-1": [], "0": [[2]], "1": []}
    path = tmp_path / "bad.json"
    path.write_text(json.dumps(bad))
    code, rep = run(capsys, "validate", str(path), data("a3_quiver.json"))
    assert code == 1
    assert [r["ok"] for r in rep["results"]] == [False, True]
    assert "normalization" in rep["failures"][0]["violations"][0]


def test_parse_error_exit_code(capsys, tmp_path):
    path = tmp_path / "broken.json"
    path.write_text("{not json")
    code, rep = run(capsys, "period", str(path))
    assert code == 2 and rep["failures"][0]["error"] == "ParseError"


def test_bad_field_exit_code(capsys):
    code, rep = run(capsys, "period", data("a3_L0.json"), "--field", "4")
    assert code == 2 and rep["field"] == FieldSpec(101).to_json()


def test_identify_needs_smash_file(capsys):
    code, rep = run(capsys, "identify", data("a3_L0.json"), data("a3_L0.json"))
    assert code == 2


def test_mismatch_exit_code(capsys, tmp_path):
    code, rep = run(capsys, "classify", data("a3_L0.json"))
    mod = rep["results"][1]["module"]
    mod.pop("violations")
    path = tmp_path / "m.json"
    path.write_text(json.dumps(mod))
    code, rep = run(capsys, "identify", str(path), data("a3_L101.json"))
    assert code == 5 and "underlying module mismatch" in rep["failures"][0]["message"]


def test_kronecker(capsys, tmp_path):
    out = tmp_path / "k.json"
    code = main(["kronecker", "--l-max", "1", "--lambdas", "2", "--out", str(out)])
    assert code == 0
    rep = json.loads(out.read_text())
    assert rep["results"][0]["module_count"] == 10 and rep["failures"] == []


def test_deterministic_output(tmp_path):
    outs = []
    for k in range(2):
        path = tmp_path / f"r{k}.json"
        subprocess.run(
            [sys.executable, "-m", "skewquiver.cli", "classify", data("a3_L0.json"), "--seed", "3", "--out", str(path)],
            check=True,
        )
        outs.append(path.read_text())
    assert outs[0] == outs[1]


def test_backends_agree(capsys):
    from skewquiver import backend

    reports = []
    for name in backend.available():
        main(["--backend", name, "kronecker", "--l-max", "1", "--lambdas", "3", "--json"])
        reports.append(capsys.readouterr().out)
    assert len(set(reports)) == 1
