from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from mixnum.errors import ParameterError, ScenarioError
from mixnum.numerology import (BaseParams, blind_plan, derive_numerology, scenario,
                               subband_allocation, validate_scenario)

# reference numerologies: k -> (kHz, N, N_cp, M, symbols per frame)
REFERENCE = {
    0: (15, 4096, 256, 1024, 1),
    1: (30, 2048, 128, 512, 2),
    2: (60, 1024, 64, 256, 4),
}


@pytest.mark.parametrize("k", sorted(REFERENCE))
def test_reference_numerology_parameters(k):
    khz, n, n_cp, m, symbols = REFERENCE[k]
    cfg = derive_numerology(k)
    assert cfg.delta_f == khz * 1e3
    assert (cfg.n_fft, cfg.n_cp, cfg.m_active, cfg.symbols_per_frame) == (n, n_cp, m, symbols)


def test_symbol_duration_identity():
    cfg = derive_numerology(0)
    assert cfg.t_ofdm == pytest.approx(cfg.t_data * (1 + 1 / 16), rel=1e-15)
    assert cfg.t_data == pytest.approx(1 / 15e3)


@given(k1=st.integers(0, 3), k2=st.integers(0, 3),
       alpha=st.sampled_from([Fraction(1, 16), Fraction(1, 8), Fraction(1, 4)]),
       n0=st.sampled_from([1024, 2048, 4096, 8192]))
def test_scaling_laws(k1, k2, alpha, n0):
    base = BaseParams(n_fft0=n0, m_active0=n0 // 4, alpha=alpha)
    a, b = derive_numerology(k1, base), derive_numerology(k2, base)
    assert a.delta_f * a.n_fft == b.delta_f * b.n_fft == base.sample_rate
    assert a.t_ofdm / b.t_ofdm == pytest.approx(2.0 ** (k2 - k1), rel=1e-12)
    assert a.symbols_per_frame * a.symbol_len == b.symbols_per_frame * b.symbol_len
    assert a.t_cp == pytest.approx(float(alpha) * a.t_data, rel=1e-12)
    assert a.n_fft & (a.n_fft - 1) == 0


@pytest.mark.parametrize("kwargs, k", [
    ({"alpha": Fraction(1, 3)}, 0),
    ({"alpha": Fraction(0)}, 0),
    ({"alpha": Fraction(1)}, 0),
    ({"n_fft0": 3000}, 0),
    ({"n_fft0": 16, "m_active0": 4, "alpha": Fraction(1, 16)}, 1),
    ({}, -1),
    ({}, 13),
])
def test_bad_parameters(kwargs, k):
    with pytest.raises(ParameterError):
        derive_numerology(k, BaseParams(**kwargs))


def test_reference_scenarios():
    p1, p2 = scenario("scenario1"), scenario("scenario2")
    assert p1.frame_len == p2.frame_len == 4352
    assert [c.k for c in p1.candidates] == [0, 1]
    assert p2.config_at(2).symbols_per_frame == 4
    assert p1.bits_per_frame == p2.bits_per_frame == 2048


def test_single_user_plan():
    plan = validate_scenario([(0, 1)])
    assert plan.n_users == 1
    assert plan.users[0][1].first_active_subcarrier == (4096 - 1024) // 2


def test_users_sorted_by_subband_position():
    plan = validate_scenario([(1, 2), (0, 1)])
    assert [c.k for c, _ in plan.users] == [0, 1]
    assert [a.user_index for _, a in plan.users] == [1, 2]


@pytest.mark.parametrize("users", [
    [(0, 1), (1, 1)],          # same subband twice
    [(0, 1), (1, 3)],          # hole in the layout
    [(0, 1), (0, 2)],          # duplicate numerology
    [(1, 1), (2, 2)],          # 2 x 2176 != 2176 frame of the largest N
    [],
])
def test_scenario_errors(users):
    with pytest.raises(ScenarioError):
        validate_scenario(users)


def test_candidate_superset_and_missing():
    plan = validate_scenario([(0, 1), (1, 2)], candidates=[0, 1, 2])
    assert [c.k for c in plan.candidates] == [0, 1, 2]
    with pytest.raises(ScenarioError):
        validate_scenario([(0, 1), (1, 2)], candidates=[0])


def test_allocation_scenario_1():
    plan = scenario("scenario1")
    (c1, a1), (c2, a2) = plan.users
    # 1024 active in a 2048-wide half band: 512 guard each side
    assert a1.first_active_subcarrier == 512
    assert a1.first_active_subcarrier + a1.m_active + 512 == 2048
    # 512 active in a 1024-wide half band at 30 kHz: 256 guard each side
    assert a2.first_active_subcarrier == 1024 + 256
    assert a2.first_active_subcarrier + a2.m_active + 256 == c2.n_fft


def test_allocation_bandwidths():
    for name in ("scenario1", "scenario2"):
        plan = scenario(name)
        widths = [a.band_width_hz for _, a in plan.users]
        assert len(set(widths)) == 1
        assert sum(widths) == plan.base.sample_rate
        starts = [a.band_start_hz for _, a in plan.users]
        assert starts[1] == starts[0] + widths[0]  # adjacent, disjoint


def test_allocation_too_wide():
    cfg = derive_numerology(0, BaseParams(m_active0=4096))
    with pytest.raises(ScenarioError):
        subband_allocation(1, cfg, 2)
    with pytest.raises(ScenarioError):
        subband_allocation(3, derive_numerology(0), 2)


def test_blind_plan_geometry():
    plan = blind_plan([0, 2], 2)
    assert plan.n_users == 2 and plan.users == ()
    assert [c.k for c in plan.candidates] == [0, 2]
