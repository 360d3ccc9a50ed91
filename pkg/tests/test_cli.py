"""Command-line interface: dispatch, reports, determinism, exit codes."""

import json

import pytest

from lgck.cli import main

from conftest import make_quintic_glsm, make_quintic_lg


@pytest.fixture()
def quintic_config(tmp_path):
    path = tmp_path / "quintic.json"
    data = make_quintic_lg().to_dict()
    data["virdim"] = {
        "g": 0,
        "d_pairing": 0,
        "insertions": [["1/5"] * 5, ["1/5"] * 5, ["1/5"] * 5],
    }
    path.write_text(json.dumps(data))
    return path


@pytest.fixture()
def glsm_config(tmp_path):
    path = tmp_path / "glsm.json"
    data = make_quintic_glsm([1, 0], [0, 0, 0, 0, 0, 1], 1).to_dict()
    data["characters"] = {"nu_plus": [1, 0], "nu_minus": [-5, 1]}
    path.write_text(json.dumps(data))
    return path


def _run(args):
    return main([str(a) for a in args])


def test_validate_ok(quintic_config, tmp_path, capsys):
    out = tmp_path / "report.json"
    assert _run(["validate", quintic_config, "--output", out]) == 0
    report = json.loads(out.read_text())
    assert report["passed"]
    assert "validate: ok" in capsys.readouterr().out


def test_validate_broken_exits_1(tmp_path, capsys):
    bad = make_quintic_lg().to_dict()
    bad["potential"] = "x1^5 + x2^3"
    path = tmp_path / "broken.json"
    path.write_text(json.dumps(bad))
    assert _run(["validate", path]) == 1
    out = capsys.readouterr().out
    assert "quasi_homogeneous" in out  # the failing check is named


def test_malformed_config_exits_2(tmp_path, capsys):
    path = tmp_path / "junk.json"
    path.write_text("{not json")
    assert _run(["validate", path]) == 2
    path2 = tmp_path / "missing_keys.json"
    path2.write_text(json.dumps({"variables": ["x"]}))
    assert _run(["validate", path2]) == 2


def test_state_space_report(quintic_config, tmp_path, capsys):
    out = tmp_path / "ss.json"
    assert _run(["state-space", quintic_config, "--output", out]) == 0
    report = json.loads(out.read_text())
    dims = sorted(s["dimension"] for s in report["sectors"])
    assert dims == [1, 1, 1, 1, 204]
    assert report["degree_histogram"] == \
        {"0": 1, "2": 1, "3": 204, "4": 1, "6": 1}
    assert "conventions" in report


def test_phases_with_named_characters(glsm_config, tmp_path, capsys):
    out1 = tmp_path / "plus.json"
    assert _run(["phases", glsm_config, "--character", "nu_plus",
                 "--output", out1]) == 0
    plus = json.loads(out1.read_text())
    assert plus["phase"]["description"] == \
        "V^ss = complement of {x1 = x2 = x3 = x4 = x5 = 0}"
    out2 = tmp_path / "minus.json"
    assert _run(["phases", glsm_config, "--character", "nu_minus",
                 "--output", out2]) == 0
    minus = json.loads(out2.read_text())
    assert minus["phase"]["description"] == "V^ss = complement of {x6 = 0}"


def test_sectors_and_pairing(quintic_config, tmp_path):
    out = tmp_path / "sec.json"
    assert _run(["sectors", quintic_config, "--output", out]) == 0
    assert json.loads(out.read_text())["count"] == 5
    out2 = tmp_path / "pairing.json"
    assert _run(["pairing", quintic_config, "--output", out2]) == 0
    rep = json.loads(out2.read_text())
    assert all(s["nonsingular"] for s in rep["sectors"])


def test_unit_and_virdim(quintic_config, tmp_path):
    out = tmp_path / "unit.json"
    assert _run(["unit", quintic_config, "--output", out]) == 0
    unit = json.loads(out.read_text())["unit"]
    assert unit["degree"] == "0"
    assert unit["route"] == "narrow generator"
    out2 = tmp_path / "vd.json"
    assert _run(["virdim", quintic_config, "--output", out2]) == 0
    assert json.loads(out2.read_text())["value"] == "3"


def test_chern_verb(tmp_path):
    cfg = tmp_path / "koszul.json"
    cfg.write_text(json.dumps({
        "koszul": {"variables": ["x", "y"], "tau": ["y"], "sigma": ["x"]},
    }))
    out = tmp_path / "chern.json"
    assert _run(["chern", cfg, "--output", out]) == 0
    rep = json.loads(out.read_text())
    assert rep["chern"]["class"] == "-1"
    assert rep["chern"]["twist"] == 1
    assert rep["todd_chern"]["twist"] == 2
    assert rep["splitting_degree_ok"]


def test_verify_cohft_verb(quintic_config, tmp_path):
    out = tmp_path / "cohft.json"
    assert _run(["verify-cohft", quintic_config, "--output", out]) == 0
    rep = json.loads(out.read_text())
    assert rep["all_pass"] and rep["failures"] == []


def test_simplicial_demo_verb(tmp_path):
    cfg = tmp_path / "empty.json"
    cfg.write_text("{}")
    out = tmp_path / "simp.json"
    assert _run(["simplicial-demo", cfg, "--output", out,
                 "--level-bound", "2"]) == 0
    rep = json.loads(out.read_text())
    assert set(rep["posets"]) == {"point", "sierpinski", "vee", "circle"}
    assert all(v["triangle"]["passed"] for v in rep["posets"].values())


def test_kunneth_verb(tmp_path):
    from corpus import fermat_model
    m1 = fermat_model([3], prefix="x").to_dict()
    m2 = fermat_model([3], prefix="y").to_dict()
    p2 = tmp_path / "other.json"
    p2.write_text(json.dumps(m2))
    m1["kunneth"] = {"other_model": str(p2)}
    p1 = tmp_path / "main.json"
    p1.write_text(json.dumps(m1))
    out = tmp_path / "kun.json"
    assert _run(["kunneth", p1, "--output", out]) == 0
    rep = json.loads(out.read_text())
    for entry in rep["pairs"]:
        assert entry["dim_sum"] == entry["dim_1"] * entry["dim_2"]


def test_determinism_byte_for_byte(quintic_config, tmp_path):
    out1, out2 = tmp_path / "a.json", tmp_path / "b.json"
    assert _run(["state-space", quintic_config, "--output", out1]) == 0
    assert _run(["state-space", quintic_config, "--output", out2]) == 0
    assert out1.read_bytes() == out2.read_bytes()


def test_bad_bounds_exit_2(quintic_config):
    assert _run(["state-space", quintic_config, "--group-order-bound", "0"]) == 2
