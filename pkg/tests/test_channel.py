import numpy as np
import pytest

from mixnum.channel import (DEFAULT_PDP, PowerDelayProfile, add_awgn, apply_channel,
                            combine_users, draw_rayleigh_channel)
from mixnum.errors import ParameterError, SizeError
from oracles import direct_convolution


def test_pdp_validation():
    assert len(PowerDelayProfile()) == 9
    with pytest.raises(ParameterError):
        PowerDelayProfile((0.5, 0.4))
    with pytest.raises(ParameterError):
        PowerDelayProfile((1.2, -0.2))
    with pytest.raises(ParameterError):
        PowerDelayProfile(())


def test_default_pdp_zero_taps_stay_zero(rng):
    pdp = PowerDelayProfile()
    zero = [i for i, p in enumerate(DEFAULT_PDP) if p == 0]
    assert zero == [1, 2, 4, 7]
    for _ in range(50):
        h = draw_rayleigh_channel(pdp, rng)
        assert np.all(h[zero] == 0)


def test_flat_rayleigh_unit_power(rng):
    pdp = PowerDelayProfile((1.0,))
    h = np.array([draw_rayleigh_channel(pdp, rng)[0] for _ in range(100_000)])
    assert np.mean(np.abs(h) ** 2) == pytest.approx(1.0, rel=0.02)


def test_ensemble_tap_powers(rng):
    pdp = PowerDelayProfile()
    h = np.array([draw_rayleigh_channel(pdp, rng) for _ in range(100_000)])
    powers = np.mean(np.abs(h) ** 2, axis=0)
    assert powers[0] == pytest.approx(0.8407, rel=0.02)
    assert powers[3] == pytest.approx(0.1332, rel=0.03)


def test_apply_channel_examples():
    a, b, c = 1 + 2j, -3, 0.5j
    x = np.array([a, b, c])
    assert np.array_equal(apply_channel(x, [1]), x)
    assert apply_channel(x, [0, 1]).tolist() == [0, a, b]


def test_apply_channel_matches_double_loop(rng):
    x = rng.standard_normal(300) + 1j * rng.standard_normal(300)
    h = draw_rayleigh_channel(PowerDelayProfile(), rng)
    assert np.max(np.abs(apply_channel(x, h) - direct_convolution(x, h))) < 1e-12


def test_apply_channel_linear(rng):
    x, y = (rng.standard_normal(200) + 1j * rng.standard_normal(200) for _ in range(2))
    h = draw_rayleigh_channel(PowerDelayProfile(), rng)
    a, b = 0.3 - 1j, 2.5
    lhs = apply_channel(a * x + b * y, h)
    assert np.allclose(lhs, a * apply_channel(x, h) + b * apply_channel(y, h), atol=1e-9)


def test_combine_users(rng):
    x = rng.standard_normal(16) + 0j
    y = rng.standard_normal(16) + 0j
    z = rng.standard_normal(16) + 0j
    assert np.array_equal(combine_users([x]), x)
    assert not combine_users([x, -x]).any()
    assert np.array_equal(combine_users([x, y]), combine_users([y, x]))
    assert np.allclose(combine_users([combine_users([x, y]), z]),
                       combine_users([x, combine_users([y, z])]))
    with pytest.raises(SizeError):
        combine_users([x, y[:3]])
    with pytest.raises(SizeError):
        combine_users([])


def test_scenario_1_composite_length(plan1, rng):
    from conftest import make_capture
    y, _, _ = make_capture(plan1, rng, frames=1)
    assert y.size == 4352


def test_awgn_disabled(rng):
    x = rng.standard_normal(32) + 1j
    y, s2 = add_awgn(x, float("inf"), 10, rng)
    assert np.array_equal(x, y) and s2 == 0.0


def test_awgn_variance_and_whiteness(rng):
    y, s2 = add_awgn(np.zeros(1_000_000), 3.0, 1, rng, energy_per_bit=1.0)
    assert s2 == pytest.approx(10 ** -0.3)
    assert np.var(y) == pytest.approx(s2, rel=0.02)
    lag1 = np.vdot(y[:-1], y[1:]) / np.vdot(y, y)
    assert abs(lag1) < 0.01


def test_awgn_measures_energy_per_bit(rng):
    x = np.full(1000, 2.0 + 0j)  # energy 4000 over 500 bits -> E_b = 8
    _, s2 = add_awgn(x, 0.0, 500, rng)
    assert s2 == pytest.approx(8.0)
    with pytest.raises(SizeError):
        add_awgn(np.zeros(0), 0.0, 1, rng)


def test_awgn_reproducible():
    x = np.ones(64, dtype=complex)
    a, _ = add_awgn(x, 5.0, 64, np.random.default_rng(9))
    b, _ = add_awgn(x, 5.0, 64, np.random.default_rng(9))
    assert np.array_equal(a, b)
