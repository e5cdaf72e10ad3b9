import json
import math

import numpy as np
import pytest

import hdistlab


def test_roundtrip_and_plancherel():
    rng = np.random.default_rng(7)
    f = rng.standard_normal((16, 16)) + 1j * rng.standard_normal((16, 16))
    g = rng.standard_normal((16, 16)) + 1j * rng.standard_normal((16, 16))

    coeffs = hdistlab.forward(f)
    back = hdistlab.inverse(coeffs)
    assert np.max(np.abs(back - f)) < 1e-12 * np.max(np.abs(f))

    # pairing(f, g) equals sum fhat conj(ghat) exactly in this normalization
    lhs = hdistlab.pairing(f, g)
    rhs = np.vdot(hdistlab.forward(g), coeffs)
    assert abs(lhs - rhs) < 1e-10


def test_pure_mode_lands_on_one_coefficient():
    n = 16
    x = np.arange(n) / n
    X, Y = np.meshgrid(x, x, indexing="ij")
    mode = np.exp(2j * np.pi * (3 * X - 5 * Y))
    c = hdistlab.forward(mode)
    assert abs(c[3, -5 % n] - 1) < 1e-12
    c[3, -5 % n] = 0
    assert np.max(np.abs(c)) < 1e-12


def test_projection_oracles():
    assert hdistlab.rho([3.0, 4.0], [1.0, 1.0]) == pytest.approx(5.0)
    eta = hdistlab.project_to_p([1.0, 1.0], [1.0, 2.0])
    assert eta[0] == pytest.approx(2.0 ** -0.5)
    assert eta[1] == pytest.approx(2.0 ** -0.25)
    assert hdistlab.hoermander_weight([1.0, 0.0], 1) == pytest.approx(
        math.sqrt(1.0 + 4.0 * math.pi**2)
    )


def test_symbol_application_respects_parity():
    rng = np.random.default_rng(3)
    f = rng.standard_normal((32, 32)).astype(complex)
    scale = hdistlab.lp_norm(f, 2.0)
    even = hdistlab.apply_symbol(f, "monomial:2,0", [1.0, 1.0])
    assert np.max(np.abs(even.imag)) < 1e-10 * scale
    odd = hdistlab.apply_symbol(f, "riesz:0", [1.0, 1.0])
    assert np.max(np.abs(odd.real)) < 1e-10 * scale


def test_fractional_derivative_on_a_mode():
    n = 32
    x = np.arange(n) / n
    mode = np.exp(2j * np.pi * 5 * x)
    out = hdistlab.fractional_derivative(mode, 0, 1.0)
    assert np.max(np.abs(out - 2j * np.pi * 5 * mode)) < 1e-9


def test_truncate_keeps_strictly_small_samples():
    f = np.array([0.5, 1.5, -2.0, 0.1], dtype=complex)
    t = hdistlab.truncate(f, 1.0)
    assert t.tolist() == [0.5, 0.0, 0.0, 0.1]


def test_sobolev_norm_inverts():
    rng = np.random.default_rng(11)
    f = rng.standard_normal((16, 16)).astype(complex)
    n_plus = hdistlab.sobolev_norm(f, 2.0, [1.0, 2.0])
    assert n_plus >= hdistlab.lp_norm(f, 2.0) * 0.99
    assert hdistlab.sobolev_norm(f, 2.0, [1.0, 2.0], invert=True) <= hdistlab.lp_norm(
        f, 2.0
    ) * 1.01


def test_catalogs():
    kinds = dict(hdistlab.experiment_kinds())
    assert "divcurl" in kinds
    assert "counterexample" in kinds
    labels = dict(hdistlab.symbol_labels())
    assert "one" in labels


def test_run_experiment_plateau(tmp_path):
    cfg = {
        "schema": "hdistlab-config-v1",
        "name": "plateau-py",
        "experiment": "counterexample",
        "family": {"x0": 0.3},
        "schedule": [8, 16, 32],
        "levels": [2, 4],
        "test_functions": [{"type": "gaussian", "center": [0.3], "sigma": 0.05}],
    }
    out = tmp_path / "out"
    report_json, code = hdistlab.run_experiment(json.dumps(cfg), str(out))
    assert code == 0
    report = json.loads(report_json)
    assert report["schema"] == "hdistlab-report-v1"
    assert report["verdict"] == "counterexample-reproduced"
    assert (out / "report.json").exists()
    assert (out / "ladders" / "entry_j0_m0.csv").exists()


def test_bad_config_rejected():
    with pytest.raises(Exception):
        hdistlab.run_experiment(json.dumps({"schema": "nope"}))


def test_verify_single_criterion():
    ok, rows = hdistlab.verify("truncation-laws")
    assert ok
    assert [r[0] for r in rows] == ["truncation-laws"]
    assert all(r[1] for r in rows)
