import math
import os
from pathlib import Path

import numpy as np
import pytest

import regime_fx as rfx

FIXTURES = Path(os.environ.get("REGIME_FX_FIXTURES", Path(__file__).resolve().parents[1] / "data"))


def test_symmetric_double_exponential_tilt():
    d = rfx.JumpDistribution.double_exponential(10.0, 10.0, 0.5)
    theta = rfx.solve_theta_j(d)
    assert theta == pytest.approx(-0.5, abs=1e-14)
    assert rfx.solve_theta_j_bisection(d) == pytest.approx(theta, abs=1e-10)
    q = rfx.transform_jump_law(d, theta)
    assert q.right_probability == pytest.approx(0.45, abs=1e-9)
    assert q.mgf(1.0) == pytest.approx(1.0, abs=1e-12)


def test_divergent_mgf_raises():
    d = rfx.JumpDistribution.double_exponential(3.0, 2.0, 0.5)
    with pytest.raises(rfx.DivergenceError):
        d.mgf(3.5)
    assert isinstance(rfx.DivergenceError("x"), rfx.Error)


def test_illustrative_model_prices():
    params, chain = rfx.illustrative_model()
    assert chain.n_states == 3
    np.testing.assert_allclose(chain.generator.sum(axis=1), 0.0, atol=1e-10)
    q = rfx.build_risk_neutral_model(params, chain, rfx.JumpDistribution.normal(0.0, 0.1))
    assert abs(q.k_q) <= 1e-9
    assert np.max(np.abs(q.martingale_residual())) <= 1e-10
    price, se = rfx.price_european_call(rfx.PricingRequest(maturity=0.5, mc_samples=2000), q)
    assert 0.0 < price < 1.0
    assert se >= 0.0


def test_single_state_black_scholes():
    params = rfx.RegimeParameters.constant(0.0, 0.2, 0.0, 0.0, 0.0)
    q = rfx.build_risk_neutral_model(
        params, rfx.MarkovRegimeModel.single_state(), rfx.JumpDistribution.normal(0.0, 0.1)
    )
    price, se = rfx.price_european_call(rfx.PricingRequest(maturity=0.5, mc_samples=8), q)
    assert price == pytest.approx(0.0563720, abs=5e-8)
    assert se == 0.0
    assert rfx.black_scholes_call(1.0, 1.0, 0.5, 0.0, 0.04) == pytest.approx(price, abs=1e-15)


def test_occupation_char_function_and_simulation():
    _, chain = rfx.illustrative_model()
    assert rfx.occupation_char_function(chain, [-0.2] * 3, 1.0) == pytest.approx(math.exp(-0.2))
    occ = rfx.simulate_occupation(chain, 0.5, 3)
    assert occ.occupation.sum() == pytest.approx(0.5, abs=1e-10)


def test_custom_law_from_python_callable():
    rate = 6.0
    d = rfx.JumpDistribution.custom(
        lambda x: 0.5 * rate * math.exp(-rate * abs(x)), -rate, rate, breakpoints=[0.0]
    )
    assert d.mgf(2.0) == pytest.approx(rate * rate / (rate * rate - 4.0), rel=1e-9)


def test_price_sweep_ordering():
    params, chain = rfx.illustrative_model()
    rows = rfx.price_sweep(params, chain, approx_num=1000)
    assert len(rows) == 30
    by_key = {(round(sk, 6), curve): price for sk, curve, price, _ in rows}
    for sk in {round(r[0], 6) for r in rows}:
        assert by_key[(sk, "double_exponential")] >= by_key[(sk, "no_jump")]
        assert by_key[(sk, "normal")] >= by_key[(sk, "no_jump")]


def test_calibration_fixture():
    opens = [float(x) for x in (FIXTURES / "zigzag20.csv").read_text().split()[1:]]
    cfg = rfx.CalibrationConfig()
    cfg.candles_back_up, cfg.candles_back_down = 2, 3
    cfg.delta_back_up, cfg.delta_back_down = 10.0, 15.0
    cfg.candles_up, cfg.candles_down = 2, 1
    cfg.delta_up, cfg.delta_down = 10.0, 5.0
    matrix, counts = rfx.estimate_transition_matrix(opens, cfg)
    assert counts == [[2, 0, 3], [3, 0, 2], [3, 3, 2]]
    np.testing.assert_allclose(matrix.sum(axis=1), 1.0, atol=1e-12)
    chain = rfx.embed_generator(matrix, 1.0 / 252.0)
    assert chain.generator[0, 2] == pytest.approx(252.0 * 0.6)
