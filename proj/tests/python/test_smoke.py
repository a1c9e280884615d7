import math

import numpy as np
import pytest

import tumorctl


def small(**kw):
    opts = dict(nx=9, ny=9, nt=336, dose_window_hours=2)
    opts.update(kw)
    return tumorctl.configure("paper-sec6", **opts)


def test_feasibility_and_reference_control():
    p = tumorctl.ModelParams()
    r = tumorctl.check_feasibility(p)
    assert r["feasible"]
    assert r["lhs"] <= r["rhs"]
    u = tumorctl.reference_constant_control(p, 2688)
    s = tumorctl.solve_s(u, p)
    assert s.shape == (2689,)
    assert s[672] == pytest.approx(p.s_minus, rel=1e-12)
    assert s.max() <= p.s_plus


def test_solve_s_closed_form():
    p = tumorctl.ModelParams()
    s = tumorctl.solve_s(np.full(280, 0.7), p)
    t = np.linspace(0, p.T, 281)
    np.testing.assert_allclose(s, 0.7 * -np.expm1(-p.M0 * t) / p.M0, atol=1e-13)
    with pytest.raises(ValueError):
        tumorctl.solve_s(np.ones(0), p)


def test_config_overrides_and_errors():
    cfg = small(eps=0.4)
    assert cfg.model.eps == 0.4
    assert cfg.nx == 9
    assert '"eps":0.4' in cfg.to_json()
    with pytest.raises(ValueError, match="bogus"):
        tumorctl.configure("coarse", bogus=1)
    with pytest.raises(ValueError):
        tumorctl.Config.preset("nope")


def test_simulate_shapes():
    cfg = small()
    pr = tumorctl.Problem(cfg)
    u = tumorctl.seed_control(cfg)
    out = tumorctl.simulate(pr, u, [0.0, 28.0])
    assert out["s"].shape == (pr.nt + 1,)
    assert out["final"].shape == (pr.ny, pr.nx)
    np.testing.assert_array_equal(out["snapshots"][0.0], pr.initial_state)
    obj = out["objective"]
    assert obj["J_eps"] == pytest.approx(obj["J"] + obj["penalty1"] + obj["penalty2"], abs=1e-12)


def test_gradient_matches_finite_differences():
    cfg = small()
    pr = tumorctl.Problem(cfg)
    u = tumorctl.seed_control(cfg)
    rep = tumorctl.gradcheck(pr, u, directions=2)
    assert rep["max_relative_error"] < 1e-4
    g = tumorctl.gradient(pr, u)
    np.testing.assert_array_equal(g["gradient"], rep["gradient"])


def test_optimize_descends_and_streams():
    cfg = small(N=4)
    pr = tumorctl.Problem(cfg)
    seen = []
    res = tumorctl.optimize(pr, tumorctl.seed_control(cfg), callback=seen.append)
    assert [r["k"] for r in seen] == list(range(5))
    assert len(res["history"]) == 5
    js = [r["J_eps"] for r in res["history"]]
    assert all(b < a for a, b in zip(js, js[1:]))
    assert res["reason"] == "max-iterations"
    assert res["step"] == pytest.approx(1 / 41)
    assert res["u"].shape == (pr.nt,)
    assert math.isfinite(res["objective"]["J_eps"])


def test_dosing_schedule():
    u = tumorctl.dosing_init(28.0, 2688, 12.096, 1 / 24)
    assert np.count_nonzero(u) == 28 * 4
