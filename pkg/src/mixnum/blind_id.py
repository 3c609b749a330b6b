"""Blind numerology identification.

Two stages. The time-domain stage slides a CP-length window along the
received composite and correlates it with the samples one FFT length later;
each candidate numerology whose CP periodicity shows up gets its type
confirmed. The frequency-domain stage strips the CP of that numerology's
first symbol, takes an ``N_k``-point FFT and picks the subband whose
amplitude spectrum is flattest (lowest variance-to-mean ratio): only the
subband carrying that numerology sees orthogonal, constant-modulus bins.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .errors import SizeError
from .numerology import NumerologyConfig, ScenarioPlan, subband_allocation


@dataclass
class CorrelationMetric:
    candidate_k: int
    values: np.ndarray


@dataclass(frozen=True)
class PeakPair:
    i_p1: int
    i_p2: int

    @property
    def estimated_size(self) -> int:
        return abs(self.i_p2 - self.i_p1)


@dataclass
class TypeVerdict:
    candidate: NumerologyConfig
    peaks: PeakPair
    nearest_k: int
    mismatch: int  # samples between the peak distance and nearest_k's closest target
    matched: bool


@dataclass
class IdentificationResult:
    verdicts: list[TypeVerdict]
    type_estimates: list[int]
    location_estimates: dict[int, int] = field(default_factory=dict)
    v_values: dict[int, np.ndarray] = field(default_factory=dict)
    subband_numerology: list[int | None] = field(default_factory=list)
    type_correct: bool | None = None
    location_correct: bool | None = None

    def to_dict(self) -> dict:
        return {
            "type_estimates": list(self.type_estimates),
            "location_estimates": {str(k): u for k, u in self.location_estimates.items()},
            "v_values": {str(k): [float(x) for x in v] for k, v in self.v_values.items()},
            "subband_numerology": list(self.subband_numerology),
            "peak_distances": {str(v.candidate.k): v.peaks.estimated_size for v in self.verdicts},
            "type_correct": self.type_correct,
            "location_correct": self.location_correct,
        }


def _window_sums(x: np.ndarray, width: int, count: int) -> np.ndarray:
    """``out[n] = sum(x[n:n+width])`` for ``n < count``, via one cumulative sum."""
    c = np.concatenate([np.zeros(1, dtype=x.dtype), np.cumsum(x[: count + width - 1])])
    return c[width: width + count] - c[:count]


def _cp_sums(y: np.ndarray, candidate: NumerologyConfig):
    n, n_cp = candidate.n_fft, candidate.n_cp
    count = y.size - n - n_cp
    if count < 1:
        raise SizeError(f"{y.size} samples too short for k={candidate.k} "
                        f"(need at least {n + n_cp + 1})")
    power = np.abs(y) ** 2
    cross = _window_sums(np.conj(y[:-n]) * y[n:], n_cp, count)
    e_head = _window_sums(power, n_cp, count)
    e_tail = _window_sums(power[n:], n_cp, count)
    # cumulative-sum differences leave rounding residue where the true sum is 0
    floor = 1e-13 * max(float(power.max(initial=0.0)), np.finfo(float).tiny) * n_cp
    return cross, e_head, e_tail, floor


def _normalize(cross, e_head, e_tail, floor) -> np.ndarray:
    ok = (e_head > floor) & (e_tail > floor)
    values = np.zeros(cross.shape)
    values[ok] = np.abs(cross[ok]) / np.sqrt(e_head[ok] * e_tail[ok])
    return np.clip(values, 0.0, 1.0)


def cp_correlation_metric(y, candidate: NumerologyConfig) -> CorrelationMetric:
    """Normalized |correlation| between ``y[n:n+N_cp]`` and ``y[n+N:n+N+N_cp]``.

    Evaluated for ``n = 0 .. len(y) - N - N_cp - 1``; positions where either
    window carries no energy score 0.
    """
    y = np.asarray(y, dtype=np.complex128)
    return CorrelationMetric(candidate.k, _normalize(*_cp_sums(y, candidate)))


def folded_cp_metric(y, candidate: NumerologyConfig) -> CorrelationMetric:
    """CP correlation with every position folded onto ``i = n mod (N + N_cp)``.

    Cross-correlation and window energies are summed over all positions
    sharing the same ``i`` before normalizing, so each symbol period of the
    observation adds evidence. Output has one value per ``i`` in one period.
    """
    y = np.asarray(y, dtype=np.complex128)
    period = candidate.symbol_len
    cross, e_head, e_tail, floor = _cp_sums(y, candidate)
    if cross.size < period:
        raise SizeError(f"{y.size} samples give {cross.size} positions, "
                        f"folding needs one period of {period}")
    idx = np.arange(cross.size) % period
    fold = lambda x: np.bincount(idx, weights=x, minlength=period)
    folded_cross = fold(cross.real) + 1j * fold(cross.imag)
    return CorrelationMetric(
        candidate.k, _normalize(folded_cross, fold(e_head), fold(e_tail), floor))


def find_peak_pair(metric: CorrelationMetric, candidate: NumerologyConfig) -> PeakPair:
    """Highest metric value in each half of the first symbol period (ties -> lowest index)."""
    period = candidate.symbol_len
    v = metric.values
    if v.size < period:
        raise SizeError(f"metric has {v.size} positions, needs one period of {period}")
    half = period // 2
    return PeakPair(int(np.argmax(v[:half])), half + int(np.argmax(v[half:period])))


def _targets(cfg: NumerologyConfig) -> tuple[int, int]:
    # a peak distance may read as the FFT size or as the full CP-extended period
    return cfg.n_fft, cfg.symbol_len


def estimate_type(y, candidates: Sequence[NumerologyConfig],
                  fold: bool = True) -> list[TypeVerdict]:
    """Per-candidate type verdicts.

    A candidate ``k`` is matched when its peak distance lies closer to one
    of ``k``'s targets (``N_k`` or ``N_k + N_cp,k``) than to any other
    candidate's, and within ``N_cp,k / 2`` samples of it.
    """
    if not candidates:
        raise ValueError("candidate set is empty")
    metric = folded_cp_metric if fold else cp_correlation_metric
    verdicts = []
    for cand in candidates:
        peaks = find_peak_pair(metric(y, cand), cand)
        d = peaks.estimated_size
        gaps = [min(abs(d - t) for t in _targets(c)) for c in candidates]
        best = int(np.argmin(gaps))
        nearest = candidates[best]
        matched = nearest.k == cand.k and gaps[best] <= cand.n_cp / 2
        verdicts.append(TypeVerdict(cand, peaks, nearest.k, gaps[best], matched))
    return verdicts


def amplitude_spectrum(y, identified: NumerologyConfig, n_symbols: int | None = 1) -> np.ndarray:
    """|FFT| of CP-stripped symbol bodies of ``identified``, DC-centred, one row per symbol.

    Symbols are taken from the start of ``y`` on the ``identified`` symbol
    grid; ``n_symbols=None`` uses every complete symbol. The transform is
    unnormalized (plain N-point DFT sum), so a unit-energy constellation
    point shows up with amplitude sqrt(N).
    """
    y = np.asarray(y, dtype=np.complex128)
    period = identified.symbol_len
    available = y.size // period
    if available < 1:
        raise SizeError(f"{y.size} samples do not hold one k={identified.k} symbol")
    count = available if n_symbols is None else min(int(n_symbols), available)
    if count < 1:
        raise ValueError("n_symbols must be positive")
    rows = y[: count * period].reshape(count, period)
    bodies = rows[:, identified.n_cp:]
    return np.abs(np.fft.fftshift(np.fft.fft(bodies, axis=-1), axes=-1))


def variation_coefficients(y, identified: NumerologyConfig, plan: ScenarioPlan,
                           n_symbols: int | None = None) -> np.ndarray:
    """Variance-to-mean ratio of the amplitude spectrum on each subband's active bins.

    Computed per symbol body and averaged over the first ``n_symbols``
    symbols (all complete ones by default). Sample variance uses the
    ``n - 1`` divisor. A band with zero mean amplitude scores ``inf``.
    """
    amp = amplitude_spectrum(y, identified, n_symbols)
    out = np.empty(plan.n_users)
    for u in range(1, plan.n_users + 1):
        band = amp[:, subband_allocation(u, identified, plan.n_users, plan.base).active_slice]
        mu = band.mean(axis=1)
        if np.any(mu <= 0):
            out[u - 1] = np.inf
        else:
            out[u - 1] = np.mean(band.var(axis=1, ddof=1) / mu)
    return out


def locate(v) -> int:
    """1-based index of the smallest V (ties -> lowest index, inf ranks last)."""
    v = np.asarray(v, dtype=float)
    if v.size == 0:
        raise ValueError("no variation coefficients to rank")
    return int(np.argmin(v)) + 1


def identify(y, plan: ScenarioPlan, truth: bool = True, fold: bool = True) -> IdentificationResult:
    """Type identification over the plan's candidate set, then location of each match.

    When several identified numerologies claim the same subband the one
    with the smaller V there keeps it. With ``truth`` the plan's user layout
    is taken as ground truth and the correctness flags are filled in.
    """
    verdicts = estimate_type(y, plan.candidates, fold=fold)
    matched = [v.candidate for v in verdicts if v.matched]
    result = IdentificationResult(verdicts=verdicts, type_estimates=[c.k for c in matched])

    owner: list[int | None] = [None] * plan.n_users
    owner_v = [np.inf] * plan.n_users
    for cfg in matched:
        v = variation_coefficients(y, cfg, plan)
        u = locate(v)
        result.v_values[cfg.k] = v
        result.location_estimates[cfg.k] = u
        if owner[u - 1] is None or v[u - 1] < owner_v[u - 1]:
            owner[u - 1], owner_v[u - 1] = cfg.k, v[u - 1]
    result.subband_numerology = owner

    if truth:
        true_ks = [cfg.k for cfg, _ in plan.users]
        result.type_correct = set(true_ks) <= set(result.type_estimates)
        result.location_correct = result.type_correct and owner == true_ks
    return result
