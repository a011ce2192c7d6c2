import json
import subprocess
import sys

import pytest

from cubegeodesic import cli


def run(*args):
    p = subprocess.run([sys.executable, "-m", "cubegeodesic.cli", *args], capture_output=True, text=True)
    return p.returncode, p.stdout, p.stderr


def test_distance_corner_pair(capsys):
    assert cli.main(["distance", "c8", "c2"]) == 0
    out = capsys.readouterr().out
    assert "squared 5" in out and "2.2360679" in out


def test_distance_same_point(capsys):
    assert cli.main(["distance", "5678:1/3,1/4", "5678:1/3,1/4"]) == 0
    assert "squared 0" in capsys.readouterr().out


def test_distance_diagonal_of_face(capsys):
    assert cli.main(["distance", "5678:0,0", "5678:1,1"]) == 0
    assert "squared 2" in capsys.readouterr().out


def test_float_mode(capsys):
    assert cli.main(["distance", "--mode", "float", "5678:0.5,0.5", "1432:0.5,0.5"]) == 0
    assert "distance 2.000000000000" in capsys.readouterr().out


def test_cutlocus_json_corner(tmp_path):
    out = tmp_path / "c8.json"
    assert cli.main(["cutlocus", "c8", "--out", str(out)]) == 0
    doc = json.loads(out.read_text())
    assert doc["schema"] == "cubegeodesic.cutlocus/1"
    assert doc["leaves"] == [1, 3, 4, 5, 6, 7]
    hub = [v for v in doc["vertices"] if v["degree"] == 6]
    assert len(hub) == 1 and hub[0]["label"] == 2


def test_cutlocus_star_has_degree_five(capsys):
    assert cli.main(["cutlocus", "star", "--mode", "float", "--tol", "1e-7"]) == 0
    doc = json.loads(capsys.readouterr().out)
    assert sorted(v["degree"] for v in doc["vertices"]).count(5) == 1


def test_cutlocus_svg(tmp_path):
    out = tmp_path / "e.svg"
    assert cli.main(["cutlocus", "5678:0,1/2", "--out", str(out)]) == 0
    text = out.read_text()
    assert text.startswith("<svg") and "<line" in text and ">5678<" in text


def test_json_is_byte_identical(tmp_path):
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    for f in (a, b):
        assert cli.main(["plan", "5678:1/5,1/2", "1432:1/3,2/3", "--out", str(f)]) == 0
    assert a.read_bytes() == b.read_bytes()


def test_plan_outputs(capsys):
    assert cli.main(["plan", "c8", "c2"]) == 0
    out = capsys.readouterr().out
    assert "index 3" in out and "table" in out
    assert cli.main(["plan", "5678:1/5,2/5", "1432:1/2,1/3"]) == 0
    assert "index 1" in capsys.readouterr().out


def test_plan_multiplicity_two(capsys):
    # a point on the arm towards corner 1 of a region-A source
    from gmpy2 import mpq
    from cubegeodesic import cube, fixtures as fx
    p = cube.point(0, mpq(1, 5), mpq(1, 2))
    q = fx._edge_point(p, fx._edge_to(1))
    arg = f"{cube.FACES[q.face].name}:{q.u},{q.v}"
    assert cli.main(["plan", "5678:1/5,1/2", arg]) == 0
    out = capsys.readouterr().out
    assert "index 2" in out and "rotation" in out


def test_classify_names_region(capsys):
    assert cli.main(["classify", "5678:1/5,1/2"]) == 0
    doc = json.loads(capsys.readouterr().out)
    assert doc["top_name"] == "A" and doc["generic"]


def test_geodesics(capsys):
    assert cli.main(["geodesics", "c8", "c2"]) == 0
    assert json.loads(capsys.readouterr().out)["multiplicity"] == 6


def test_usage_errors():
    assert run("distance", "9999:0,0", "c1")[0] == 2
    assert run("distance", "5678:2,0", "c1")[0] == 2
    assert run("frobnicate")[0] == 2
    assert run("verify", "nosuchsuite")[0] == 2
    assert run("geodesics", "c1", "c1")[0] == 2


def test_verify_geometry_suite(tmp_path):
    out = tmp_path / "report.json"
    code, text, _ = run("verify", "geometry", "--out", str(out))
    assert code == 0, text
    assert "PASS metric properties" in text
    doc = json.loads(out.read_text())
    assert doc["schema"] == "cubegeodesic.verify/1" and all(c["passed"] for c in doc["checks"])


def test_verify_reports_failure(monkeypatch, capsys):
    from cubegeodesic import verify
    monkeypatch.setitem(verify.SUITES, "geometry", ("metric",))
    monkeypatch.setitem(verify.EXTRA, "metric", ("broken", lambda seed: (False, "forced", {})))
    assert cli.main(["verify", "geometry"]) == 1
    assert "FAIL broken" in capsys.readouterr().out


def test_atlas_small_face(tmp_path, capsys):
    out = tmp_path / "atlas.svg"
    assert cli.main(["atlas", "--res", "4", "--depth", "4", "--out", str(out)]) == 0
    assert "expected total 193" in capsys.readouterr().out
    assert out.read_text().startswith("<svg")
