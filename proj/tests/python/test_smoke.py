"""End-to-end smoke of the python bindings against pinned values."""

import math

import pytest

import hmmlyap as hl

P = [[0.9, 0.1], [0.2, 0.8]]
Q = [[0.9, 0.1], [0.1, 0.9]]


@pytest.fixture(scope="module")
def model():
    return hl.build_model(P, Q)


def test_rng_contract():
    assert hl.mix64(0) == 0xE220A8397B1DCDAF
    assert hl.substream(14728, 0) == 0xFDC843B3BD969456


def test_model_and_hypotheses(model):
    assert model.k == 2
    assert model.pi[0] == pytest.approx(2.0 / 3.0, rel=1e-12)
    rep = hl.check_hypotheses(model)
    assert rep["h1_holds"] and rep["h2_holds"]
    assert rep["R"] == pytest.approx(10.0, rel=1e-12)
    assert rep["alpha"] == pytest.approx(5.0 / 7.0, rel=1e-12)
    marg = hl.observation_marginal(model)
    assert marg[0] == pytest.approx(19.0 / 30.0, rel=1e-12)


def test_model_validation():
    with pytest.raises(ValueError):
        hl.build_model([[0.9, 0.2], [0.2, 0.8]], Q)


def test_frozen_sample_path(model):
    path = hl.sample_path(model, 12, hl.substream(14728, 0))
    assert path["x"] == [2, 2, 2, 2, 1, 1, 1, 1, 1, 1, 1, 2]
    assert path["z"] == [2, 2, 2, 2, 1, 1, 1, 1, 1, 2, 1, 1]


def test_curves_match_bruteforce(model):
    path = hl.sample_path(model, 32, hl.substream(14728, 100))
    window = path["z"][-12:]
    curves = hl.delta_curve(model, window, triples=[(1, 1, 2)], n_max=8)
    assert len(curves) == 1
    for n in range(1, 9):
        oracle = hl.delta_bruteforce(model, window, (1, 1, 2), n)
        assert curves[0].values[n - 1] == pytest.approx(oracle, rel=1e-10)


def test_rate_estimation(model):
    path = hl.sample_path(model, 400, hl.substream(14728, 0))
    window = path["z"][-399:]
    curves = hl.delta_curve(model, window, triples=[(1, 1, 2)], n_max=400)
    rate = hl.estimate_rate(curves[0], 20, 400)
    assert rate["tau_hat"] == pytest.approx(-1.660316846660, abs=1e-9)


def test_lyapunov_and_identities(model):
    est = hl.lyapunov(model, 100000, hl.substream(14728, 102))
    total = sum(est["lambdas"])
    assert total == pytest.approx(math.log(0.063), abs=1e-9)
    gap = est["lambdas"][1] - est["lambdas"][0]
    assert gap == pytest.approx(-1.6585, abs=0.05)
    assert hl.proposition_lower_bound(model) == pytest.approx(
        math.log(0.7) - 2.0 * math.log(10.0), rel=1e-12
    )


def test_perturbation_module():
    pm = hl.build_perturb(0.9, 0.2, 1e-3)
    assert pm.beta == pytest.approx(0.1)
    path = hl.sample_path(hl.to_hmm(pm), 60, hl.substream(14728, 300))
    forward = [z - 1 for z in path["z"]]
    res = hl.solve_h(pm, forward, 40)
    assert abs(res["h_value"]) <= pm.D
    assert res["contraction_estimate"] < 1.0
    assert hl.verify_eigenrelation(pm, forward, 40) <= 1e-8

    rb = hl.binary_rate_bound(hl.build_perturb(0.9, 0.2, 0.1))
    assert rb["ledet"] == pytest.approx(
        math.log(0.1) + math.log(0.9) + math.log(0.7), rel=1e-12
    )
    with pytest.raises(ValueError):
        hl.build_perturb(0.9, 0.2, 0.5)


def test_slow_space_geometry(model):
    path = hl.sample_path(model, 400, hl.substream(14728, 500))
    window = path["z"][-399:]
    f = hl.estimate_codim1_direction(model, window)
    u1, xi1 = hl.decompose_psi(model, 1, f)
    assert min(xi1) < 0.0 < max(xi1)
    pr = hl.projective_ratio_curve(model, [0.9, 0.2], [1.0, 1.0], window)
    assert pr["gamma"][-1] == pytest.approx(pr["delta"][-1], rel=1e-12)
