import json

import pytest

from tautrank import cli
from tautrank.flagvar import PluckerPolynomial
from tautrank.weyl import parse_operator


def run(tmp_path, *argv):
    out = tmp_path / "out.json"
    code = cli.main([*argv, "--json", str(out)])
    return code, json.loads(out.read_text(encoding="utf-8"))


@pytest.mark.parametrize("spec,counts", [
    ("pn(1,2)", (1, 3, 1)),
    ("grassmannian-plucker(2,4)", (1, 16, 1)),
    ("pn(2,3)", (27, 8, 1)),
])
def test_build(tmp_path, spec, counts):
    code, data = run(tmp_path, "build", "--spec", spec)
    assert code == 0 and data["schema_version"] == cli.SCHEMA_VERSION
    c = data["system"]["counts"]
    assert (c["ideal"], c["lie"], c["euler"]) == counts
    n = data["system"]["num_vars"]
    for g in data["system"]["generators"]:
        parse_operator(g["operator"], n)


def test_rank_p1(tmp_path):
    code, data = run(tmp_path, "rank", "--spec", "pn(1,2)", "--point", "generic")
    assert code == 0
    assert (data["oracle_rank"], data["predicted_rank"], data["match"]) == (1, 1, True)
    code, data = run(tmp_path, "rank", "--spec", "pn(1,2)", "--point", "1,0,0")
    assert code == 0 and data["oracle_rank"] == 0 and data["predicted_rank"] == 0


def test_rank_p2_xyz_mod_p(tmp_path):
    code, data = run(tmp_path, "rank", "--spec", "pn(2,3)", "--point", "xyz", "--mod-p", "auto", "--orders", "0:4")
    assert code == 0 and data["oracle_rank"] == 1 and data["case"] == "pn_toric"
    assert data["report"]["field"].startswith("F_")


def test_generic_sample_is_deterministic_and_screened(tmp_path):
    _, a = run(tmp_path, "rank", "--spec", "pn(1,2)", "--point", "generic-sample", "--seed", "4")
    _, b = run(tmp_path, "rank", "--spec", "pn(1,2)", "--point", "generic-sample", "--seed", "4")
    assert a["point"] == b["point"] and a["seed"] == 4
    assert a["predicted_rank"] == 1 and a["match"]


def test_origin_has_no_prediction(tmp_path):
    code, data = run(tmp_path, "rank", "--spec", "pn(1,2)", "--point", "0,0,0")
    assert code == 0 and data["predicted_rank"] is None and "zero section" in data["reason"]
    assert any("origin" in n for n in data["notes"])


def test_mismatch_sets_exit_code(tmp_path, monkeypatch):
    monkeypatch.setattr(cli, "predict_rank", lambda sys_, a: {"predicted_rank": 7, "case": "forced"})
    code, data = run(tmp_path, "rank", "--spec", "pn(1,2)")
    assert code == 1 and data["match"] is False


@pytest.mark.parametrize("shape,text", [
    ("2,4", "x12^2*x34^2"),
    ("1,2,3,5", "x1*x2*x12^2*x345^3"),
    ("1,2,3,4,5", "x1*x2*x12^2*x345^2*x1345*x2345"),
])
def test_rank1(tmp_path, shape, text):
    code, data = run(tmp_path, "rank1", "--shape", shape, "--verify", "--samples", "3")
    assert code == 0 and data["match"]
    cert = data["certificate"]
    assert cert["section_text"] == text
    assert str(PluckerPolynomial.from_json(cert["section"])) == text


def test_predict(tmp_path):
    code, data = run(tmp_path, "predict", "--spec", "grassmannian-plucker(2,4)")
    assert code == 0
    assert data["ambient_poincare"]["betti_even"] == [1, 1, 2, 1, 1]
    assert data["anticanonical_euler_characteristic"] == -176 and data["generic_rank"] == 181
    code, data = run(tmp_path, "predict", "--spec", "pn(2,3)", "--point", "fermat")
    assert data["predicted_rank"] == 2 and data["hypersurface_betti"] == [1, 2, 1]


def test_stdout_json(capsys):
    assert cli.main(["build", "--spec", "pn(1,2)", "--json", "-"]) == 0
    assert json.loads(capsys.readouterr().out)["command"] == "build"


def test_errors(capsys):
    assert cli.main(["build", "--spec", "flag(1,2)"]) == 2
    assert cli.main(["rank", "--spec", "pn(1,2)", "--point", "1,2"]) == 2
    assert cli.main(["rank", "--spec", "grassmannian-plucker(2,4)", "--point", "xyz"]) == 2
    assert "error" in capsys.readouterr().err
