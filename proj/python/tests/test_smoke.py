import json
import math
import os
import subprocess

import pytest

import egflow


def test_newton_conversions():
    tau, sigma = egflow.profile_from_roots([1.0, 2.0], 3)
    assert tau == pytest.approx([3.0, 5.0, 9.0])
    assert sigma == pytest.approx([3.0, 2.0])
    assert egflow.sigma_from_tau([3.0, 5.0]) == pytest.approx([3.0, 2.0])
    assert egflow.tau_from_sigma([3.0, 2.0], 3) == pytest.approx([3.0, 5.0, 9.0])


def test_closure_matrix_and_eigensystem():
    m = egflow.closure_matrix([3.0, 2.0], 1)
    assert m == [[0.0, 0.5], [-4.0, 3.0]]
    pairs = egflow.closure_eigensystem([1.0, 2.0], 1)
    values = sorted(v for v, _, _ in pairs)
    assert values == pytest.approx([1.0, 2.0])
    assert all(res < 1e-10 for _, _, res in pairs)


def test_analyze_flow():
    out = egflow.analyze_flow("ricci", 2, [3.0, 5.0])
    assert out["classification"] == "strictly-hyperbolic"
    assert sorted(out["eigenvalues"]) == pytest.approx([-3.0, 0.0])
    assert out["matrix"] == [[-6.0, 1.0], [-18.0, 3.0]]
    with pytest.raises(egflow.InvalidInputError):
        egflow.analyze_flow("ent:5", 3, [1.0, 2.0, 3.0])


def test_discriminant():
    d, kind = egflow.ricci_discriminant_n3(6.0, 11.0, 6.0)
    assert d == pytest.approx(-48.0)
    assert kind == "strictly-hyperbolic"


def test_transport_and_conservation():
    n = 400
    xs = [2.0 * math.pi * i / n for i in range(n)]
    values = [math.sin(x) for x in xs]
    moved = egflow.solve_transport(0.0, 2.0 * math.pi, values, True, 0.5, math.pi)
    want = [math.sin(x - 0.5 * math.pi) for x in xs]
    assert max(abs(a - b) for a, b in zip(moved, want)) < 1e-5

    xs = [-2.0 + 4.0 * i / 399 for i in range(400)]
    out = egflow.solve_conservation_law([0.0, 0.0, 1.0], -2.0, 2.0, xs, False, 5.0)
    assert max(abs(v - x / 6.0) for v, x in zip(out, xs)) < 1e-8
    assert egflow.blowup_time_conservation(
        [0.0, 0.0, 1.0], -2.0, 2.0, [-x for x in xs], False
    ) == pytest.approx(1.0)


def test_umbilical_ricci_life_span():
    xs = [-1.0 + 2.0 * i / 499 for i in range(500)]
    t = egflow.ricci_umbilical_blowup_time(-1.0, 1.0, xs, False, 2)
    assert t == pytest.approx(0.5)
    assert egflow.umbilical_psi("ricci", 2, 1.5) == pytest.approx(-2.0 * 1.5**2)


def test_gauss_curvature():
    n = 600
    a, b = 0.4, math.pi - 0.4
    xs = [a + (b - a) * i / (n - 1) for i in range(n)]
    phi = [math.sin(x) for x in xs]
    k = egflow.gauss_curvature_rotational(a, b, phi, False)
    assert max(abs(v - 1.0) for v in k) < 5e-4


def test_scenario_roundtrip(tmp_path):
    report = egflow.run_scenario(
        "umbilical_burgers", out_dir=str(tmp_path), cells=200,
        x_min=0.0, x_max=2.0 * math.pi, t_end=1.0, t_samples=21,
    )
    assert report["scenario"] == "umbilical_burgers"
    assert report["blowup_time"] == pytest.approx(5.0, rel=1e-3)
    assert all(m["pass"] for m in report["metrics"].values())
    lam = tmp_path / "lambda.csv"
    assert lam.exists()
    assert lam.read_text().startswith("x,t,value\n")
    rep = json.loads((tmp_path / "report.json").read_text())
    assert rep["achieved_t"] == pytest.approx(1.0)
    assert "umbilical_burgers" in egflow.scenario_names()


@pytest.mark.skipif("EGFLOW_CLI" not in os.environ, reason="CLI path not provided")
def test_cli_analyze():
    out = subprocess.run(
        [os.environ["EGFLOW_CLI"], "analyze", "--flow", "ricci", "--roots", "1,2"],
        capture_output=True, text=True, check=True,
    )
    data = json.loads(out.stdout)
    assert data["classification"] == "strictly-hyperbolic"
