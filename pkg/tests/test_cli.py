import json
import subprocess
import sys

import pytest

from ncprod.cli import CHECKS, CheckReport, RunConfig, list_families, main, run
from ncprod.errors import SpecParseError
from ncprod.families import TEMPLATES, make
from ncprod.scalar import GaussianRational


def test_quaternionic_all_checks(tmp_json, capsys):
    path = tmp_json(TEMPLATES["quaternionic"])
    code = main(["verify", "--spec", path, "--max-degree", "4", "--max-weight", "3"])
    out = capsys.readouterr().out
    assert code == 0
    assert "verdict: PASS" in out
    for name in CHECKS:
        assert name in out


def test_toric_constraint_exit_2(tmp_json, capsys):
    path = tmp_json({"kind": "toric8", "sign": "+", "params": {"u": 1, "v": 1, "n": [0, 0, 1]}})
    assert main(["verify", "--spec", path]) == 2
    err = capsys.readouterr().err
    assert "ConstraintViolated" in err and "u^2+v^2=1" in err


def test_corrupted_entry_exit_1(tmp_json, capsys):
    obj = make("theta4", u="3/5", v="4/5").to_json()
    obj["entries"][0][0][0][0] = {"re": "1/2", "im": "1/2"}
    path = tmp_json(obj)
    assert main(["verify", "--spec", path, "--checks", "axioms"]) == 1
    out = capsys.readouterr().out
    assert "[FAIL   ] axioms" in out
    assert "reality:" in out and "defect indices (0-based): 0,0,0,0" in out


def test_blocked_checks(tmp_json, tmp_path):
    obj = make("theta4", u="3/5", v="4/5").to_json()
    obj["entries"][0][0][0][0] = "1"
    out = tmp_path / "r.json"
    assert main(["verify", "--spec", tmp_json(obj), "--checks", "dims,quotients", "--json", str(out)]) == 1
    rep = CheckReport.from_json(json.loads(out.read_text()))
    assert rep.checks["axioms"].status == "fail"
    assert rep.blocked() == ["dims", "quotients"]
    assert rep.failures() == ["axioms"]


def test_symmetry_skipped_for_other_kinds(tmp_json):
    report, code, _ = run(RunConfig(tmp_json(TEMPLATES["theta4"]), checks=("symmetry",)))
    assert code == 0
    assert report.checks["symmetry"].status == "skipped"


def test_minus_sign_uses_left_action(tmp_json):
    spec = dict(TEMPLATES["quaternionic"], sign="-")
    report, code, _ = run(RunConfig(tmp_json(spec), checks=("symmetry",)))
    assert code == 0
    assert report.checks["symmetry"].details["side"] == "left"


def test_json_report_roundtrip(tmp_json, tmp_path):
    out = tmp_path / "report.json"
    main(["verify", "--spec", tmp_json(TEMPLATES["theta4"]), "--json", str(out)])
    obj = json.loads(out.read_text())
    rep = CheckReport.from_json(obj)
    assert rep.to_json() == obj
    assert CheckReport.from_json(rep.to_json()) == rep
    assert obj["verdict"] == "pass"
    assert obj["checks"]["dims"]["details"]["table"][2] == {"n": 2, "dim": 10, "expected": 10}


def test_float_mode(tmp_json):
    spec = {"kind": "theta4", "params": {"u": 0.6, "v": 0.8}}
    assert main(["verify", "--spec", tmp_json(spec), "--checks", "axioms"]) == 2
    assert main(["verify", "--spec", tmp_json(spec), "--checks", "axioms,dims", "--mode", "float"]) == 0


def test_bad_inputs(tmp_json, tmp_path):
    assert main(["verify", "--spec", str(tmp_path / "missing.json")]) == 2
    p = tmp_path / "broken.json"
    p.write_text("{not json")
    assert main(["verify", "--spec", str(p)]) == 2
    assert main(["verify", "--spec", tmp_json({"hello": 1})]) == 2
    assert main(["verify", "--spec", tmp_json(TEMPLATES["theta4"]), "--checks", "nope"]) == 2


def test_run_config_validation():
    with pytest.raises(SpecParseError):
        RunConfig("x.json", checks=())
    with pytest.raises(SpecParseError):
        RunConfig("x.json", max_degree=0)


def test_threads_env(tmp_json, monkeypatch):
    monkeypatch.setenv("NCPROD_THREADS", "4")
    report, code, _ = run(RunConfig(tmp_json(TEMPLATES["stratum1"]), checks=("axioms", "center", "pbw", "quotients")))
    assert code == 0 and list(report.checks) == ["axioms", "center", "pbw", "quotients"]


def test_families_listing(capsys):
    cat = list_families()
    assert len(cat) == 7
    assert main(["families", "--json"]) == 0
    printed = json.loads(capsys.readouterr().out)
    assert printed == cat
    quat = next(e for e in cat if e["kind"] == "quaternionic")
    assert quat["constraint"] == "(u0)^2+(u1)^2+(u2)^2=1"


def test_stratum1_template_exact():
    p = TEMPLATES["stratum1"]["params"]
    g = GaussianRational
    assert sum(g(x) ** 2 for x in p["v"]) * sum(g(x) ** 2 for x in p["w"]) + g(p["u"]) ** 2 == 1


def test_module_entry_point(tmp_json):
    proc = subprocess.run(
        [sys.executable, "-m", "ncprod", "verify", "--spec", tmp_json(TEMPLATES["classical"]), "--json", "-"],
        capture_output=True,
        text=True,
    )
    assert proc.returncode == 0
    assert json.loads(proc.stdout)["verdict"] == "pass"
