import math

import numpy as np
import pytest

import pnmdi


def test_lossless_baseline():
    k = pnmdi.key_rate([0.5, 0.5], [0.5, 0.5], pnmdi.ChannelParams.symmetric(0.0))
    assert k.total_key_rate == pytest.approx(0.5, abs=1e-9)
    assert [r.label for r in k.rows] == ["c=0", "c=1", "c=2"]


def test_bounds():
    assert pnmdi.plob_bound(0.5) == pytest.approx(1.0)
    assert math.isinf(pnmdi.plob_bound(1.0))
    tau, plob, rep = pnmdi.bound_point(100.0)
    assert tau == pytest.approx(0.01)
    assert plob == pytest.approx(-math.log2(0.99))


def test_povm_resolution():
    for n in (1, 3):
        res = pnmdi.charlie_povm_resolution(n)
        assert np.allclose(res, np.eye((n + 1) ** 2), atol=1e-12)


def test_conditional_state_is_a_density_matrix():
    rho, p = pnmdi.conditional_state([0.8, 0.2], [0.8, 0.2], pnmdi.ChannelParams.symmetric(50.0), 1)
    assert rho.shape == (4, 4)
    assert np.trace(rho).real == pytest.approx(1.0)
    assert 0.0 < p < 1.0


def test_tomography_round_trip():
    rho, _ = pnmdi.conditional_state([0.85, 0.15], [0.85, 0.15], pnmdi.ChannelParams.symmetric(100.0), 1)
    rec = pnmdi.exact_statistics(rho)
    assert np.allclose(pnmdi.reconstruct_state(rec), rho, atol=1e-12)
    sampled = pnmdi.sample_statistics(rho, 1000, seed=3)
    assert sampled["shots_per_pair"] == 1000
    assert pnmdi.sample_statistics(rho, 1000, seed=3)["r"] == sampled["r"]


def test_realistic_relay_and_sweep():
    det = pnmdi.DetectorParams(0.85, 5e-8)
    a = pnmdi.fixture_coefficients("table5", 100.0)
    k = pnmdi.realistic_key_rate(a, a, pnmdi.ChannelParams.symmetric(100.0), det)
    assert k.total_key_rate > 0.0
    assert len(k.rows) == 16
    rows = pnmdi.distance_sweep([0.0, 100.0], "table3", workers=2)
    assert rows[0].key_rate == pytest.approx(0.5, abs=1e-3)
    assert math.isinf(rows[0].plob)


def test_optimizer_single_photon():
    r = pnmdi.optimize_coefficients(1, 200.0, full_quantum=True)
    assert r.coefficients[0] == pytest.approx(0.8575, abs=0.01)


def test_classical_marginals_match():
    ch = pnmdi.ChannelParams(0.3, 0.3)
    q = pnmdi.charlie_marginals([0.5, 0.3, 0.2], [0.6, 0.3, 0.1], ch)
    c = pnmdi.classical_charlie_prob([0.5, 0.3, 0.2], [0.6, 0.3, 0.1], 0.3)
    assert np.allclose(q, c, atol=1e-10)


def test_invalid_input_raises():
    with pytest.raises(ValueError):
        pnmdi.key_rate([0.7, 0.7], [0.5, 0.5], pnmdi.ChannelParams.symmetric(1.0))
    with pytest.raises(ValueError):
        pnmdi.DetectorParams(1.5, 0.0)
