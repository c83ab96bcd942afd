import json
import math

import numpy as np
import pytest

from bseries.butcher import EULER, IMPLICIT_MIDPOINT, RK4, elementary_weights
from bseries.fixtures import cubic_oscillator, perturbed_oscillator, rotation_2d, scalar_exponential
from bseries.harness import (
    ConvergenceError,
    ExperimentConfig,
    compile_trig,
    convergence_study,
    euler_modified_field,
    integrate,
    observed_rates,
    real_field,
    reference_solution,
    rk_step,
    rows_to_csv,
    splitting_step,
    splitting_modified_field,
    steps_for,
)
from bseries.splitting import STRANG, SplittingScheme
from bseries.vectorfields import bseries_eval

PROBLEM = perturbed_oscillator()


def test_euler_and_rk4_single_steps():
    f = scalar_exponential()
    assert rk_step(EULER, f, [1.0], 0.1)[0] == pytest.approx(1.1, abs=1e-15)
    assert abs(rk_step(RK4, f, [1.0], 0.1)[0] - math.exp(0.1)) < 1e-7


def test_implicit_midpoint_preserves_circle():
    f = rotation_2d()
    x = np.array([0.6, 0.8])
    for _ in range(50):
        x = rk_step(IMPLICIT_MIDPOINT, f, x, 0.2)
    assert abs(x @ x - 1.0) < 1e-13


def test_fixed_point_cap_raises():
    f = scalar_exponential()
    with pytest.raises(ConvergenceError):
        rk_step(IMPLICIT_MIDPOINT, f, [1.0], 5.0)


def test_reference_solution_accuracy():
    x = reference_solution(rotation_2d(), [1.0, 0.0], 3.0)
    assert np.max(np.abs(x - [math.cos(3.0), math.sin(3.0)])) < 1e-11


def test_compiled_trig_field_matches_generic():
    tf = PROBLEM.full_field()
    ev = compile_trig(tf)
    for pt in np.random.default_rng(1).normal(size=(5, 2)):
        assert np.max(np.abs(ev(pt) - np.array(tf(pt), dtype=complex))) < 1e-14


def test_real_field_rejects_complex_values():
    from bseries.extended import TrigField
    from bseries.polynomials import Poly, PolyMap

    one = Poly.constant(1, 1)
    tf = TrigField(1, 1, {(1,): PolyMap([one, one], 1)})
    with pytest.raises(ValueError):
        real_field(tf)(np.array([0.0, 0.3]))


def test_splitting_without_perturbation_is_rotation():
    x = np.array([0.5, 0.1])
    idle = SplittingScheme((0.3, 0.7), (0.0, 0.0))
    assert np.allclose(splitting_step(idle, PROBLEM, x, 0.4), [0.5, 0.5], atol=1e-15)
    quiet = perturbed_oscillator(eps=0.0)
    assert np.allclose(splitting_step(STRANG, quiet, x, 0.4), [0.5, 0.5], atol=1e-15)


def test_steps_for():
    assert steps_for(10.0, 0.1) == 100
    with pytest.raises(ValueError):
        steps_for(1.0, 0.3)


def test_observed_rates():
    rates = observed_rates([0.2, 0.1, 0.05], [4e-2, 1e-2, 2.5e-3])
    assert rates[0] == pytest.approx(2.0) and rates[1] == pytest.approx(2.0)
    assert math.isnan(rates[2])


def write_config(tmp_path, **cfg):
    p = tmp_path / "exp.json"
    p.write_text(json.dumps(cfg))
    return ExperimentConfig.from_json(json.loads(p.read_text()), base=tmp_path)


def fixture_file(tmp_path, name, obj):
    (tmp_path / name).write_text(json.dumps(obj))
    return name


@pytest.fixture
def files(tmp_path):
    return {
        "euler": fixture_file(tmp_path, "euler.json", EULER.to_json()),
        "rk4": fixture_file(tmp_path, "rk4.json", RK4.to_json()),
        "cubic": fixture_file(tmp_path, "cubic.json", cubic_oscillator().to_json()),
        "strang": fixture_file(tmp_path, "strang.json", STRANG.to_json()),
        "problem": fixture_file(tmp_path, "problem.json", PROBLEM.to_json()),
    }


def test_euler_and_rk4_global_rates(tmp_path, files):
    x0 = [0.3, 0.2]
    cfg = write_config(tmp_path, method="rk", tableau=files["euler"], field=files["cubic"], steps=[0.02, 0.01, 0.005], T=2.0, x0=x0)
    assert all(abs(r - 1) < 0.1 for _, _, r in convergence_study(cfg)[:-1])
    cfg = write_config(tmp_path, method="rk", tableau=files["rk4"], field=files["cubic"], steps=[0.2, 0.1, 0.05], T=2.0, x0=x0)
    assert all(abs(r - 4) < 0.2 for _, _, r in convergence_study(cfg)[:-1])


def test_bseries_local_and_global_rates(tmp_path, files):
    x0 = [0.3, 0.2]
    local = write_config(tmp_path, method="bseries", field=files["cubic"], steps=[0.2, 0.1, 0.05], T=1.0, x0=x0, grade=6, local=True)
    assert all(abs(r - 7) < 0.3 for _, _, r in convergence_study(local)[:-1])
    glob = write_config(tmp_path, method="bseries", field=files["cubic"], steps=[0.2, 0.1, 0.05], T=1.0, x0=x0, grade=6)
    assert all(abs(r - 6) < 0.3 for _, _, r in convergence_study(glob)[:-1])


def test_strang_global_rate(tmp_path, files):
    cfg = write_config(tmp_path, method="splitting", scheme=files["strang"], problem=files["problem"], steps=[0.4, 0.2, 0.1], T=4.0, x0=[0.5, 0.0])
    assert all(abs(r - 2) < 0.2 for _, _, r in convergence_study(cfg)[:-1])


def test_euler_step_is_its_truncated_bseries():
    f = cubic_oscillator()
    x = [0.3, 0.2]
    weights = elementary_weights(EULER, 4)
    defects = []
    for h in (0.1, 0.05):
        exact = rk_step(EULER, f, x, h)
        defects.append(np.max(np.abs(exact - np.array(bseries_eval(weights, f, x, h), dtype=float))))
    # explicit Euler is x + h f(x): every higher elementary weight vanishes
    assert max(defects) < 1e-15


def test_rk4_step_matches_bseries_to_high_order():
    f = cubic_oscillator()
    x = [0.3, 0.2]
    weights = elementary_weights(RK4, 5)
    d = []
    for h in (0.1, 0.05):
        exact = rk_step(RK4, f, x, h)
        d.append(np.max(np.abs(exact - np.array(bseries_eval(weights, f, x, h), dtype=float))))
    assert math.log(d[0] / d[1], 2) > 5.5


def test_euler_modified_field_tracks_at_rate_three():
    f = cubic_oscillator()
    x0 = [0.3, 0.2]
    T = 2.0
    hs = [0.04, 0.02, 0.01]
    errs = []
    for h in hs:
        g = euler_modified_field(f, h, grade=2)
        errs.append(np.max(np.abs(integrate(lambda x, hh: rk_step(EULER, f, x, hh), x0, T, h) - reference_solution(g, x0, T))))
    assert min(observed_rates(hs, errs)[:-1]) >= 2.8


def test_strang_modified_system_tracks(tmp_path):
    x0 = [0.5, 0.0]
    T = 4.0
    hs = [0.4, 0.2, 0.1]
    P = real_field(PROBLEM.perturbation())
    errs = []
    for h in hs:
        num = integrate(lambda x, hh: splitting_step(STRANG, PROBLEM, x, hh, perturbation=P), x0, T, h)
        mod = reference_solution(splitting_modified_field(STRANG, PROBLEM, h, 2), x0, T)
        errs.append(np.max(np.abs(num - mod)))
    assert min(observed_rates(hs, errs)[:-1]) >= 2.8


def test_csv_format_is_deterministic():
    rows = [(0.1, 1 / 3, 2.0), (0.05, 1 / 12, float("nan"))]
    text = rows_to_csv(rows)
    assert text == rows_to_csv(rows)
    lines = text.splitlines()
    assert lines[0] == "h,error,rate"
    assert lines[1] == "0.10000000000000001,0.33333333333333331,2"
    assert lines[2].endswith(",")


@pytest.mark.parametrize(
    "patch, message",
    [
        ({"method": "leapfrog"}, "method"),
        ({"steps": [0.1, 0.2]}, "decreasing"),
        ({"steps": []}, "empty"),
        ({"mode": "exact"}, "float"),
        ({"tableau": None}, "tableau"),
        ({"colour": "red"}, "unknown"),
        ({"tableau": "missing.json"}, "cannot read"),
    ],
)
def test_config_validation(tmp_path, files, patch, message):
    cfg = {"method": "rk", "tableau": files["euler"], "field": files["cubic"], "steps": [0.2, 0.1], "T": 1.0, "x0": [0.3, 0.2]}
    cfg.update(patch)
    if cfg.get("tableau") is None:
        del cfg["tableau"]
    with pytest.raises(ValueError, match=message):
        ExperimentConfig.from_json(cfg, base=tmp_path)


def test_config_rejects_unparseable_file(tmp_path, files):
    (tmp_path / "bad.json").write_text(json.dumps({"A": [[0]], "b": [1, 2]}))
    cfg = {"method": "rk", "tableau": "bad.json", "field": files["cubic"], "steps": [0.2], "T": 1.0, "x0": [0.3, 0.2]}
    with pytest.raises(ValueError, match="does not parse"):
        ExperimentConfig.from_json(cfg, base=tmp_path)
