import json
import math

import pytest

from bseries.butcher import EULER, RK4
from bseries.cli import main
from bseries.fixtures import cubic_oscillator


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_trees_table(capsys):
    code, out, _ = run(capsys, "trees", "-N", "4")
    assert code == 0
    rows = [line.split() for line in out.splitlines()[1:]]
    assert len(rows) == 8
    assert [(int(r[0]), int(r[-2]), int(r[-1])) for r in rows] == [
        (1, 1, 1), (2, 1, 2), (3, 1, 6), (3, 2, 3), (4, 1, 24), (4, 2, 12), (4, 1, 8), (4, 6, 4)]


def test_trees_json(capsys):
    code, out, _ = run(capsys, "trees", "-N", "3", "--json")
    assert code == 0
    rows = json.loads(out)
    assert rows[-1] == {"tree": [1, 2, 2], "order": 3, "sigma": 2, "density": 3}


def test_rk_order(capsys):
    code, out, _ = run(capsys, "rk-order", "-i", "euler.json")
    assert code == 0 and out.strip() == "order 1"
    code, out, _ = run(capsys, "rk-order", "-i", "rk4.json", "-N", "5", "--expect", "4")
    assert code == 0 and out.strip() == "order 4"
    code, out, _ = run(capsys, "rk-order", "-i", "rk4.json", "-N", "4")
    assert out.strip() == "order 4 (checked through 4)"
    code, _, err = run(capsys, "rk-order", "-i", "euler.json", "--expect", "2")
    assert code == 1 and "expected order 2" in err


def test_rk_order_conditions_listing(capsys):
    code, out, _ = run(capsys, "rk-order", "-i", "rk4.json", "-N", "3", "--conditions")
    lines = out.splitlines()
    assert lines[0].startswith("ok   sum_i b_i = 1")
    assert any("sum_ijk b_i a_ij a_ik = 1/3" in line for line in lines)


def test_rk_order_float_mode(tmp_path, capsys):
    tab = {"A": [[0, 0], [0.5, 0]], "b": [0, 1.0]}
    (tmp_path / "mid.json").write_text(json.dumps(tab))
    code, out, _ = run(capsys, "rk-order", "-i", str(tmp_path / "mid.json"), "--mode", "float")
    assert code == 0 and out.strip() == "order 2"


def test_rk_symplectic(capsys):
    code, out, _ = run(capsys, "rk-symplectic", "-i", "implicit_midpoint.json", "-N", "5", "--expect", "yes")
    assert code == 0 and out.splitlines()[-1] == "symplectic"
    code, out, _ = run(capsys, "rk-symplectic", "-i", "euler.json", "--expect", "no")
    assert code == 0 and out.splitlines()[-1] == "not symplectic"
    assert "fail at ([1], [1])" in out
    code, _, _ = run(capsys, "rk-symplectic", "-i", "euler.json", "--expect", "yes")
    assert code == 1


def test_compose_and_modified_equation(tmp_path, capsys):
    code, out, _ = run(capsys, "compose", "-i", "euler.json", "--then", "euler.json", "-N", "2")
    assert code == 0
    assert json.loads(out) == {"": "1", "1": "2", "1,2": "1"}
    code, out, _ = run(capsys, "modified-equation", "-i", "euler.json", "-N", "3")
    report = json.loads(out)
    assert report["modified_field"]["1,2"] == "-1/2"
    assert report["modified_field"]["1,2,3"] == "1/3"
    assert report["hamiltonian_through_grade_4"] is False
    code, out, _ = run(capsys, "modified-equation", "-i", "implicit_midpoint.json", "-N", "4")
    assert json.loads(out)["hamiltonian_through_grade_4"] is True


def test_compose_needs_group_like_first_map(tmp_path, capsys):
    (tmp_path / "beta.json").write_text(json.dumps({"": "0", "1": "1", "1,2": "0"}))
    code, _, err = run(capsys, "compose", "-i", str(tmp_path / "beta.json"), "--then", "euler.json", "-N", "2")
    assert code == 2 and "group-like" in err


def test_words(capsys):
    code, out, _ = run(capsys, "words", "-N", "2", "--alphabet", "a,b", "--t", "2")
    report = json.loads(out)
    assert code == 0 and report["group_element"] is True
    assert report["coefficients"]["coeffs"]["a.b"] == "2"
    code, out, _ = run(capsys, "words", "-N", "2", "--omega", "1", "--t", "0.5")
    assert code == 0 and json.loads(out)["group_element"] is True
    code, out, _ = run(capsys, "words", "-N", "2", "--omega", "1", "--modes=-1;0;1", "--t", "0.5")
    coeffs = json.loads(out)["coefficients"]
    assert code == 0 and coeffs["letters"] == "vectors" and coeffs["alphabet"] == ["-1", "0", "1"]


def test_splitting_analyze(capsys):
    code, out, _ = run(capsys, "splitting-analyze", "-i", "strang.json", "--omega", "1", "--h", "0.3", "-N", "3")
    report = json.loads(out)
    assert code == 0 and report["resonances"] == []
    assert report["modified_system"]["lie_element"] is True
    code, out, _ = run(capsys, "splitting-analyze", "-i", "strang.json", "--omega", "1", "--h", str(2 * math.pi), "-N", "1")
    report = json.loads(out)
    assert report["modified_system"] is None
    assert {"letters": [[1]], "j": 1} in report["resonances"]
    code, _, err = run(capsys, "splitting-analyze", "-i", "strang.json", "--omega", "1", "--h", str(2 * math.pi),
                       "-N", "1", "--require-nonresonant")
    assert code == 1 and "resonance" in err


def test_splitting_analyze_with_problem(capsys):
    code, out, _ = run(capsys, "splitting-analyze", "-i", "lie_trotter.json", "--omega", "1", "--h", "0.2",
                       "--problem", "perturbed_oscillator.json", "-N", "2")
    assert code == 0
    assert json.loads(out)["modes"] == [[-1], [0], [1]]


def test_verify_self_checks(capsys):
    code, out, _ = run(capsys, "verify")
    assert code == 0
    assert out.count("PASS") == 7 and "FAIL" not in out


def test_verify_convergence(tmp_path, capsys):
    (tmp_path / "rk4.json").write_text(json.dumps(RK4.to_json()))
    (tmp_path / "f.json").write_text(json.dumps(cubic_oscillator().to_json()))
    cfg = {"method": "rk", "tableau": "rk4.json", "field": "f.json", "steps": [0.4, 0.2, 0.1], "T": 2.0, "x0": [0.3, 0.2]}
    (tmp_path / "exp.json").write_text(json.dumps(cfg))
    out_csv = tmp_path / "rates.csv"
    code, _, _ = run(capsys, "verify", "-i", str(tmp_path / "exp.json"), "-o", str(out_csv), "--expect-rate", "4")
    assert code == 0
    first = out_csv.read_text()
    assert first.splitlines()[0] == "h,error,rate"
    run(capsys, "verify", "-i", str(tmp_path / "exp.json"), "-o", str(out_csv))
    assert out_csv.read_text() == first
    code, _, _ = run(capsys, "verify", "-i", str(tmp_path / "exp.json"), "--expect-rate", "3")
    assert code == 1
    cfg["steps"] = [0.1, 0.2]
    (tmp_path / "bad.json").write_text(json.dumps(cfg))
    code, _, err = run(capsys, "verify", "-i", str(tmp_path / "bad.json"))
    assert code == 2 and "decreasing" in err


def test_verify_config_may_name_shipped_fixtures(tmp_path, capsys):
    cfg = {"method": "rk", "tableau": "euler.json", "field": "cubic_oscillator.json", "steps": [0.02, 0.01], "T": 1.0, "x0": [0.3, 0.2]}
    (tmp_path / "exp.json").write_text(json.dumps(cfg))
    code, out, _ = run(capsys, "verify", "-i", str(tmp_path / "exp.json"), "--expect-rate", "1", "--rate-tol", "0.1")
    assert code == 0 and out.startswith("h,error,rate")


def test_output_is_byte_deterministic(tmp_path, capsys):
    outs = []
    for name in ("a.json", "b.json"):
        run(capsys, "splitting-analyze", "-i", "strang.json", "--omega", "1", "--h", "0.3", "-o", str(tmp_path / name))
        outs.append((tmp_path / name).read_bytes())
    assert outs[0] == outs[1]


def test_bad_input_exit_codes(tmp_path, capsys):
    code, _, err = run(capsys, "rk-order", "-i", str(tmp_path / "nope.json"))
    assert code == 2 and "cannot read" in err
    (tmp_path / "junk.json").write_text("{not json")
    code, _, _ = run(capsys, "rk-order", "-i", str(tmp_path / "junk.json"))
    assert code == 2
    with pytest.raises(SystemExit) as info:
        main(["trees", "--bogus"])
    assert info.value.code == 2
    with pytest.raises(SystemExit) as info:
        main(["rk-order"])
    assert info.value.code == 2


def test_stdin_input(monkeypatch, capsys):
    import io

    monkeypatch.setattr("sys.stdin", io.StringIO(json.dumps(EULER.to_json())))
    code, out, _ = run(capsys, "rk-order", "-i", "-")
    assert code == 0 and out.strip() == "order 1"
