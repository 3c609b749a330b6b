import random
from statistics import NormalDist

import mpmath
import numpy as np
import pytest
from hypothesis import given, strategies as st

from mixnum.metrics import (Tally, TrialOutcome, aggregate, ber_awgn_bpsk, ber_rayleigh_bpsk,
                            db_to_linear, q_function, row_from_tally)


def _q_reference(x):
    mpmath.mp.dps = 40
    return float(mpmath.erfc(mpmath.mpf(x) / mpmath.sqrt(2)) / 2)


@pytest.mark.parametrize("x", [-3.0, -0.5, 0.0, 0.1, 1.0, 1.6449, 2.5, 4.0, 6.0, 8.0])
def test_q_function_vs_high_precision(x):
    assert abs(q_function(x) - _q_reference(x)) < 1e-12


def test_q_function_examples():
    assert q_function(0.0) == 0.5
    assert q_function(np.inf) == 0.0
    assert q_function(NormalDist().inv_cdf(0.95)) == pytest.approx(0.05, abs=1e-12)
    assert abs(q_function(1.6449) - 0.05) < 1e-4


def test_ber_awgn_examples():
    assert ber_awgn_bpsk(0.0) == 0.25
    assert ber_awgn_bpsk(np.inf) == 0.0
    assert abs(ber_awgn_bpsk(1.0) - 0.5 * _q_reference(np.sqrt(2))) < 1e-12
    assert abs(ber_awgn_bpsk(1.0) - 0.0393) < 1e-4


def test_ber_rayleigh_examples():
    assert ber_rayleigh_bpsk(0.0) == 0.5
    assert ber_rayleigh_bpsk(1.0) == pytest.approx(0.5 * (1 - np.sqrt(0.5)), abs=1e-15)
    assert abs(ber_rayleigh_bpsk(1.0) - 0.14645) < 1e-5
    assert ber_rayleigh_bpsk(1e3) == pytest.approx(1 / 4e3, rel=0.05)
    assert ber_rayleigh_bpsk(np.inf) == 0.0


@pytest.mark.parametrize("f", [ber_awgn_bpsk, ber_rayleigh_bpsk])
def test_negative_snr_rejected(f):
    with pytest.raises(ValueError):
        f(-0.1)


def test_closed_forms_decreasing_and_ordered():
    snr = db_to_linear(np.arange(-10, 20.5, 0.5))
    awgn, ray = ber_awgn_bpsk(snr), ber_rayleigh_bpsk(snr)
    assert np.all(np.diff(awgn) < 0) and np.all(np.diff(ray) < 0)
    assert np.all(ray >= awgn)


def _outcome(i, ok=True, errs=0, bits=100, snr=0.0):
    return TrialOutcome(snr, 0, i, ok, ok, errs, errs, bits)


def test_trial_outcome_invariants():
    with pytest.raises(ValueError):
        TrialOutcome(0.0, 0, 0, True, True, 101, 0, 100)
    with pytest.raises(ValueError):
        TrialOutcome(0.0, 0, 0, False, True, 0, 0, 100)


def test_aggregate_examples():
    assert aggregate([_outcome(i) for i in range(10)]).joint_success_rate == 1.0
    row = aggregate([_outcome(i, ok=i % 2 == 0) for i in range(10)])
    assert row.type_success_rate == row.location_success_rate == row.joint_success_rate == 0.5
    assert row.ber_theory_awgn == ber_awgn_bpsk(1.0)  # 0 dB
    assert row.ber_theory_rayleigh == ber_rayleigh_bpsk(1.0)
    with pytest.raises(ValueError):
        aggregate([])
    with pytest.raises(ValueError):
        aggregate([_outcome(0), _outcome(1, snr=2.0)])


def test_aggregate_binomial_error_injection():
    rng = np.random.default_rng(3)
    errs = rng.binomial(100, 0.1, 10_000)
    row = aggregate([_outcome(i, errs=int(e)) for i, e in enumerate(errs)])
    sigma = np.sqrt(0.1 * 0.9 / 1e6)
    assert abs(row.ber_blind - 0.1) < 3 * sigma
    assert row.ber_nonblind == row.ber_blind


def test_receivers_not_run_give_nan():
    o = TrialOutcome(0.0, 0, 0, None, None, None, 3, 10)
    row = aggregate([o])
    assert np.isnan(row.joint_success_rate) and np.isnan(row.ber_blind)
    assert row.ber_nonblind == 0.3


@given(st.lists(st.tuples(st.booleans(), st.integers(0, 50)), min_size=1, max_size=30),
       st.randoms(use_true_random=False))
def test_aggregate_permutation_invariant(items, rnd: random.Random):
    outs = [_outcome(i, ok, e, 50) for i, (ok, e) in enumerate(items)]
    shuffled = outs[:]
    rnd.shuffle(shuffled)
    assert aggregate(outs) == aggregate(shuffled)


@given(st.lists(st.integers(0, 20), min_size=3, max_size=3))
def test_tally_merge_associative(errs):
    a, b, c = (Tally.of(_outcome(i, i % 2 == 0, e, 20)) for i, e in enumerate(errs))
    assert a.merge(b).merge(c) == a.merge(b.merge(c))
    assert a.merge(Tally()) == a


def test_row_requires_trials():
    with pytest.raises(ValueError):
        row_from_tally(0.0, Tally())
    row = row_from_tally(0.0, Tally.of(_outcome(0)))
    assert row.binomial_sigma(1.0) == 0.0
