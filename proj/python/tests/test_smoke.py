import json

import numpy as np
import pytest

import hpn


def test_chi():
    assert hpn.chi(1) == 24.0
    assert hpn.chi(3) == 40.0


def test_algebra_suite_passes():
    report = hpn.verify("algebra")
    assert report
    assert all(c["pass"] for c in report)
    assert {c["criterion"] for c in report} == {1, 2}


def test_bad_scope_raises():
    with pytest.raises(ValueError):
        hpn.verify("bogus")


def test_soliton_matches_its_time_derivative():
    N, L, a, x0, d = 256, 24.0, 2.0, 12.0, 1e-5
    u, v = hpn.mkdv_soliton(N, L, a, x0)
    assert u.shape == (N, 4) and v.shape == (N, 0, 4)
    up, _ = hpn.mkdv_soliton(N, L, a, x0, d)
    um, _ = hpn.mkdv_soliton(N, L, a, x0, -d)
    ru, _ = hpn.mkdv_rhs(u, v, L, galilean_removed=True)
    assert np.max(np.abs(ru - (up - um) / (2 * d))) < 1e-5


def test_level_one_is_mkdv_in_line_mode():
    N, L = 256, 24.0
    u, v = hpn.sg_vector_kink(N, L, 2, 2.0, 12.0, q=[0.5, 0.5, -0.5, 0.5])
    hu, hv = hpn.hierarchy_flow(u, v, L, 1, mode="line")
    mu, mv = hpn.mkdv_rhs(u, v, L, galilean_removed=True)
    scale = max(1.0, np.max(np.abs(mv)))
    assert np.max(np.abs(hv - mv)) < 1e-6 * scale
    assert np.max(np.abs(hu - mu)) < 1e-6 * scale


def test_shape_errors():
    with pytest.raises(ValueError):
        hpn.mkdv_rhs(np.zeros((64, 3)), np.zeros((64, 0, 4)), 1.0)


def test_simulate_and_reconstruct():
    cfg = {
        "grid": {"N": 256, "L": 24.0, "mode": "line"},
        "flow": {"kind": "sg", "dt": 0.005, "t_end": 0.01, "cfl": 0.1, "dealias": False},
        "initial": {"preset": "sg_kink", "a": 2.0},
    }
    run = hpn.simulate(json.dumps(cfg))
    assert run["t"][0] == 0.0 and run["t"][-1] == pytest.approx(0.01)
    assert run["drift_H0"] < 1e-8
    gamma = hpn.reconstruct_curve(run["u"][-1], run["v"][-1], 24.0)
    assert gamma.shape == (256, 2, 4)
    norms = np.sum(gamma**2, axis=(1, 2))
    assert np.allclose(norms, 1.0, atol=1e-10)


def test_run_command_exit_codes(tmp_path):
    rc, out, _ = hpn.run_command("verify", scope="algebra")
    assert rc == 0 and "criterion 1" in out
    rc, _, err = hpn.run_command("verify", scope="bogus")
    assert rc == 2 and err
    rc, _, _ = hpn.run_command("simulate", config_json='{"grid": {"bad": 1}}', out=str(tmp_path))
    assert rc == 2
