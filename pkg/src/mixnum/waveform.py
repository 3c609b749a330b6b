"""CP-OFDM transmitter: BPSK mapping, subcarrier placement, IDFT and CP."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import ParameterError, PayloadError, SizeError
from .numerology import NumerologyConfig, SubbandAllocation


def map_bpsk(bits) -> np.ndarray:
    """0 -> +1, 1 -> -1."""
    bits = np.asarray(bits, dtype=np.int8).ravel()
    return (1 - 2 * bits).astype(np.complex128)


def centered_to_fft_order(bins: np.ndarray) -> np.ndarray:
    """Reorder a DC-centred spectrum (index 0 = -N/2) into standard FFT order."""
    return np.fft.ifftshift(bins, axes=-1)


def fft_to_centered(bins: np.ndarray) -> np.ndarray:
    return np.fft.fftshift(bins, axes=-1)


def build_freq_vector(symbols, allocation: SubbandAllocation,
                      config: NumerologyConfig) -> np.ndarray:
    """Place ``symbols`` on the allocation's bins of a DC-centred length-N vector.

    Accepts a 2-D ``(n_symbols, m_active)`` array as well, producing one
    row per OFDM symbol.
    """
    symbols = np.asarray(symbols, dtype=np.complex128)
    if symbols.shape[-1] != allocation.m_active:
        raise PayloadError(
            f"expected {allocation.m_active} symbols per OFDM symbol, got {symbols.shape[-1]}")
    end = allocation.first_active_subcarrier + allocation.m_active
    if allocation.first_active_subcarrier < 0 or end > config.n_fft:
        raise PayloadError(f"allocation [{allocation.first_active_subcarrier}, {end}) "
                           f"exceeds N={config.n_fft}")
    bins = np.zeros(symbols.shape[:-1] + (config.n_fft,), dtype=np.complex128)
    bins[..., allocation.active_slice] = symbols
    return bins


def _check_size(n: int):
    if n < 1 or n & (n - 1):
        raise SizeError(f"transform length {n} is not a power of two")


def idft(bins) -> np.ndarray:
    """Unitary inverse DFT along the last axis (bins in FFT order)."""
    bins = np.asarray(bins, dtype=np.complex128)
    _check_size(bins.shape[-1])
    return np.fft.ifft(bins, axis=-1, norm="ortho")


def dft(samples) -> np.ndarray:
    """Unitary forward DFT along the last axis; ``dft(idft(s)) == s``."""
    samples = np.asarray(samples, dtype=np.complex128)
    _check_size(samples.shape[-1])
    return np.fft.fft(samples, axis=-1, norm="ortho")


def add_cp(symbol, n_cp: int) -> np.ndarray:
    """Prepend the last ``n_cp`` samples (works row-wise on 2-D input)."""
    symbol = np.asarray(symbol)
    if n_cp < 0 or n_cp > symbol.shape[-1]:
        raise ParameterError(f"CP length {n_cp} invalid for a {symbol.shape[-1]}-sample symbol")
    if n_cp == 0:
        return symbol.copy()
    return np.concatenate([symbol[..., -n_cp:], symbol], axis=-1)


@dataclass
class UserFrame:
    samples: np.ndarray
    user_index: int
    payload_bits: np.ndarray
    bins: np.ndarray  # (symbols_per_frame, n_fft), DC-centred


def assemble_user_frame(bits, config: NumerologyConfig,
                        allocation: SubbandAllocation) -> UserFrame:
    bits = np.asarray(bits, dtype=np.int8).ravel()
    if bits.size != config.bits_per_frame:
        raise PayloadError(f"k={config.k} frame carries {config.bits_per_frame} bits, "
                           f"got {bits.size}")
    symbols = map_bpsk(bits).reshape(config.symbols_per_frame, config.m_active)
    bins = build_freq_vector(symbols, allocation, config)
    body = idft(centered_to_fft_order(bins))
    samples = add_cp(body, config.n_cp).ravel()
    return UserFrame(samples=samples, user_index=allocation.user_index,
                     payload_bits=bits, bins=bins)
