"""Closed-form BPSK error rates and Monte-Carlo aggregation."""

from __future__ import annotations

from dataclasses import dataclass, fields
from functools import reduce
from typing import Iterable

import numpy as np
from scipy.special import erfc


def q_function(x):
    """Gaussian tail probability Q(x) = erfc(x / sqrt 2) / 2."""
    return 0.5 * erfc(np.asarray(x, dtype=float) / np.sqrt(2.0))


def _check_snr(snr):
    snr = np.asarray(snr, dtype=float)
    if np.any(snr < 0) or np.any(np.isnan(snr)):
        raise ValueError(f"SNR must be non-negative, got {snr}")
    return snr


def ber_awgn_bpsk(snr_linear):
    """0.5 * Q(sqrt(2 SNR)), the AWGN baseline as written for the reference curves."""
    snr = _check_snr(snr_linear)
    return 0.5 * q_function(np.sqrt(2.0 * snr))


def ber_rayleigh_bpsk(snr_linear):
    snr = _check_snr(snr_linear)
    with np.errstate(invalid="ignore"):
        ratio = np.where(np.isinf(snr), 1.0, snr / (snr + 1.0))
    return 0.5 * (1.0 - np.sqrt(ratio))


def db_to_linear(snr_db):
    return 10.0 ** (np.asarray(snr_db, dtype=float) / 10.0)


@dataclass(frozen=True)
class TrialOutcome:
    """One trial. Fields of a receiver that did not run are ``None``."""

    snr_db: float
    seed: int
    trial_index: int
    type_correct: bool | None
    location_correct: bool | None
    bit_errors_blind: int | None
    bit_errors_nonblind: int | None
    total_bits: int

    def __post_init__(self):
        for name in ("bit_errors_blind", "bit_errors_nonblind"):
            v = getattr(self, name)
            if v is not None and not 0 <= v <= self.total_bits:
                raise ValueError(f"{name}={v} outside [0, {self.total_bits}]")
        if self.location_correct and not self.type_correct:
            raise ValueError("location cannot be correct when the type is not")


@dataclass(frozen=True)
class Tally:
    """Mergeable partial aggregate of trial outcomes."""

    trials: int = 0
    id_trials: int = 0
    type_ok: int = 0
    location_ok: int = 0
    joint_ok: int = 0
    errors_blind: int = 0
    bits_blind: int = 0
    errors_nonblind: int = 0
    bits_nonblind: int = 0

    @classmethod
    def of(cls, o: TrialOutcome) -> "Tally":
        ran_id = o.type_correct is not None
        ran_b = o.bit_errors_blind is not None
        ran_nb = o.bit_errors_nonblind is not None
        return cls(
            trials=1,
            id_trials=int(ran_id),
            type_ok=int(bool(o.type_correct)),
            location_ok=int(bool(o.location_correct)),
            joint_ok=int(bool(o.type_correct and o.location_correct)),
            errors_blind=o.bit_errors_blind or 0,
            bits_blind=o.total_bits if ran_b else 0,
            errors_nonblind=o.bit_errors_nonblind or 0,
            bits_nonblind=o.total_bits if ran_nb else 0,
        )

    def merge(self, other: "Tally") -> "Tally":
        return Tally(*(getattr(self, f.name) + getattr(other, f.name) for f in fields(self)))


@dataclass(frozen=True)
class SweepRow:
    snr_db: float
    trials: int
    type_success_rate: float
    location_success_rate: float
    joint_success_rate: float
    ber_blind: float
    ber_nonblind: float
    ber_theory_awgn: float
    ber_theory_rayleigh: float

    def binomial_sigma(self, rate: float) -> float:
        return float(np.sqrt(rate * (1 - rate) / self.trials))


def row_from_tally(snr_db: float, t: Tally) -> SweepRow:
    if t.trials < 1:
        raise ValueError("cannot build a row from zero trials")
    snr = db_to_linear(snr_db)
    ratio = lambda num, den: num / den if den else float("nan")
    return SweepRow(
        snr_db=float(snr_db),
        trials=t.trials,
        type_success_rate=ratio(t.type_ok, t.id_trials),
        location_success_rate=ratio(t.location_ok, t.id_trials),
        joint_success_rate=ratio(t.joint_ok, t.id_trials),
        ber_blind=ratio(t.errors_blind, t.bits_blind),
        ber_nonblind=ratio(t.errors_nonblind, t.bits_nonblind),
        ber_theory_awgn=float(ber_awgn_bpsk(snr)),
        ber_theory_rayleigh=float(ber_rayleigh_bpsk(snr)),
    )


def aggregate(outcomes: Iterable[TrialOutcome]) -> SweepRow:
    outcomes = list(outcomes)
    if not outcomes:
        raise ValueError("no outcomes to aggregate")
    snrs = {o.snr_db for o in outcomes}
    if len(snrs) != 1:
        raise ValueError(f"outcomes mix SNR points: {sorted(snrs)}")
    return row_from_tally(outcomes[0].snr_db, reduce(Tally.merge, map(Tally.of, outcomes)))
