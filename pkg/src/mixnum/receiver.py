"""Per-user demodulation and bit-error counting (blind or genie parameters)."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import FramingError, SizeError
from .numerology import NumerologyConfig, SubbandAllocation
from .waveform import dft, fft_to_centered


@dataclass
class DemodReport:
    user_index: int
    bits_out: np.ndarray
    bit_errors: int | None
    mode: str  # "blind" or "non-blind"


def remove_cp(frame, config: NumerologyConfig) -> np.ndarray:
    """Split into ``(n_symbols, n_fft)`` bodies, dropping each CP."""
    frame = np.asarray(frame)
    period = config.symbol_len
    if frame.size % period:
        raise FramingError(f"{frame.size} samples is not a whole number of "
                           f"{period}-sample k={config.k} symbols")
    return frame.reshape(-1, period)[:, config.n_cp:]


def count_bit_errors(tx_bits, rx_bits) -> int:
    tx_bits = np.asarray(tx_bits).ravel()
    rx_bits = np.asarray(rx_bits).ravel()
    if tx_bits.size != rx_bits.size:
        raise SizeError(f"bit streams differ in length: {tx_bits.size} vs {rx_bits.size}")
    return int(np.count_nonzero(tx_bits != rx_bits))


def channel_response(taps, config: NumerologyConfig) -> np.ndarray:
    """Frequency response of ``taps`` on the DC-centred N-bin grid of ``config``."""
    taps = np.asarray(taps, dtype=np.complex128)
    if taps.size > config.n_fft:
        raise SizeError("channel longer than the FFT")
    return fft_to_centered(np.fft.fft(taps, config.n_fft))


def demodulate_subband(y, config: NumerologyConfig, allocation: SubbandAllocation,
                       taps=None, mode: str = "non-blind", tx_bits=None) -> DemodReport:
    """CP removal, unitary DFT, active-bin extraction, one-tap ZF, BPSK slicing.

    ``taps`` is the genie channel of this user; ``None`` skips equalization.
    With ``tx_bits`` the report carries the error count.
    """
    if mode not in ("blind", "non-blind"):
        raise ValueError(f"unknown mode {mode!r}")
    bins = fft_to_centered(dft(remove_cp(y, config)))[:, allocation.active_slice]
    if taps is not None:
        bins = bins / channel_response(taps, config)[allocation.active_slice]
    bits = (bins.real < 0).astype(np.int8).ravel()
    errors = None if tx_bits is None else count_bit_errors(tx_bits, bits)
    return DemodReport(allocation.user_index, bits, errors, mode)
