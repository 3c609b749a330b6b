"""Multipath Rayleigh channel, user superposition and calibrated AWGN."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .errors import ParameterError, SizeError

# 9-tap normalized power delay profile (mW), used for the fading scenarios.
DEFAULT_PDP = (0.8407, 0.0, 0.0, 0.1332, 0.0, 0.0168, 0.0067, 0.0, 0.0027)


@dataclass(frozen=True)
class PowerDelayProfile:
    tap_powers: tuple[float, ...] = DEFAULT_PDP

    def __post_init__(self):
        p = tuple(float(x) for x in self.tap_powers)
        object.__setattr__(self, "tap_powers", p)
        if not p:
            raise ParameterError("power delay profile is empty")
        if any(x < 0 or not math.isfinite(x) for x in p):
            raise ParameterError(f"tap powers must be finite and non-negative: {p}")
        if abs(sum(p) - 1.0) > 1e-3:
            raise ParameterError(f"tap powers sum to {sum(p):.6f}, expected 1")

    def __len__(self):
        return len(self.tap_powers)


@dataclass
class ChannelRealization:
    taps_per_user: list[np.ndarray]
    noise_sigma2: float


def draw_rayleigh_channel(pdp: PowerDelayProfile, rng: np.random.Generator) -> np.ndarray:
    p = np.asarray(pdp.tap_powers)
    g = (rng.standard_normal(p.size) + 1j * rng.standard_normal(p.size)) / np.sqrt(2)
    return np.sqrt(p) * g


def apply_channel(frame, taps) -> np.ndarray:
    """Linear convolution with the tail beyond ``len(frame)`` dropped."""
    frame = np.asarray(frame, dtype=np.complex128)
    taps = np.asarray(taps, dtype=np.complex128)
    if taps.size < 1:
        raise ParameterError("channel needs at least one tap")
    return np.convolve(frame, taps)[: frame.size]


def combine_users(user_signals: Sequence[np.ndarray]) -> np.ndarray:
    if not user_signals:
        raise SizeError("no user signals to combine")
    n = len(user_signals[0])
    if any(len(s) != n for s in user_signals):
        raise SizeError(f"user signals differ in length: {[len(s) for s in user_signals]}")
    return np.sum(np.asarray(user_signals, dtype=np.complex128), axis=0)


def add_awgn(signal, snr_db: float, n_bits: int, rng: np.random.Generator,
             energy_per_bit: float | None = None) -> tuple[np.ndarray, float]:
    """Add complex white Gaussian noise at ``snr_db = 10 log10(E_b / N_o,T)``.

    E_b is measured from ``signal`` (total energy over ``n_bits``) unless
    given. ``N_o,T`` is the per-sample complex noise variance. An infinite
    ``snr_db`` returns the signal untouched.
    """
    signal = np.asarray(signal, dtype=np.complex128)
    if signal.size == 0:
        raise SizeError("cannot add noise to an empty signal")
    if math.isinf(snr_db) and snr_db > 0:
        return signal.copy(), 0.0
    if energy_per_bit is None:
        if n_bits < 1:
            raise ParameterError("n_bits must be positive to calibrate E_b")
        energy_per_bit = float(np.vdot(signal, signal).real) / n_bits
    sigma2 = energy_per_bit / 10 ** (snr_db / 10)
    noise = rng.standard_normal((2, signal.size)) * np.sqrt(sigma2 / 2)
    return signal + (noise[0] + 1j * noise[1]), sigma2
