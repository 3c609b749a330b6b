"""Scalable OFDM numerologies and multi-user subband layouts.

A numerology is fixed by its scaling factor ``k``: the subcarrier spacing
grows as ``2**k`` while the FFT size, CP length and active-subcarrier count
shrink by the same factor, so every numerology shares one sampling rate.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from .errors import ParameterError, ScenarioError


@dataclass(frozen=True)
class BaseParams:
    """Reference (k = 0) numerology, LTE-like defaults."""

    delta_f0: float = 15e3
    n_fft0: int = 4096
    m_active0: int = 1024
    alpha: Fraction = Fraction(1, 16)
    frame_symbol_budget: int = 1

    def __post_init__(self):
        object.__setattr__(self, "alpha", Fraction(self.alpha).limit_denominator(1 << 20))

    @property
    def sample_rate(self) -> float:
        return self.delta_f0 * self.n_fft0

    def to_dict(self) -> dict:
        return {
            "delta_f0": self.delta_f0,
            "n_fft0": self.n_fft0,
            "m_active0": self.m_active0,
            "alpha": str(self.alpha),
            "frame_symbol_budget": self.frame_symbol_budget,
        }

    @classmethod
    def from_dict(cls, d: dict) -> "BaseParams":
        d = dict(d)
        if "alpha" in d:
            d["alpha"] = Fraction(str(d["alpha"]))
        return cls(**d)


@dataclass(frozen=True)
class NumerologyConfig:
    k: int
    delta_f: float
    n_fft: int
    n_cp: int
    m_active: int
    t_data: float
    t_cp: float
    t_ofdm: float
    symbols_per_frame: int

    @property
    def symbol_len(self) -> int:
        """Samples per CP-extended symbol."""
        return self.n_fft + self.n_cp

    @property
    def frame_len(self) -> int:
        return self.symbols_per_frame * self.symbol_len

    @property
    def bits_per_frame(self) -> int:
        return self.symbols_per_frame * self.m_active


def _is_pow2(n: int) -> bool:
    return n > 0 and (n & (n - 1)) == 0


def derive_numerology(k: int, base: BaseParams | None = None) -> NumerologyConfig:
    base = base or BaseParams()
    if int(k) != k or k < 0:
        raise ParameterError(f"k must be a non-negative integer, got {k!r}")
    k = int(k)
    if not _is_pow2(base.n_fft0):
        raise ParameterError(f"n_fft0={base.n_fft0} is not a power of two")
    if not 0 < base.alpha < 1:
        raise ParameterError(f"alpha={base.alpha} outside (0, 1)")
    if base.frame_symbol_budget < 1:
        raise ParameterError("frame_symbol_budget must be >= 1")
    scale = 1 << k
    if base.n_fft0 % scale:
        raise ParameterError(f"2**{k} does not divide n_fft0={base.n_fft0}")
    n_fft = base.n_fft0 // scale
    n_cp = base.alpha * n_fft
    if n_cp.denominator != 1:
        raise ParameterError(f"CP length alpha*N = {n_cp} is not an integer for k={k}")
    if base.m_active0 % scale:
        raise ParameterError(f"2**{k} does not divide m_active0={base.m_active0}")

    delta_f = scale * base.delta_f0
    t_data = 1.0 / delta_f
    t_cp = float(base.alpha) * t_data
    return NumerologyConfig(
        k=k,
        delta_f=delta_f,
        n_fft=n_fft,
        n_cp=int(n_cp),
        m_active=base.m_active0 // scale,
        t_data=t_data,
        t_cp=t_cp,
        t_ofdm=t_data + t_cp,
        symbols_per_frame=scale * base.frame_symbol_budget,
    )


@dataclass(frozen=True)
class SubbandAllocation:
    """Where one user's active subcarriers sit.

    ``first_active_subcarrier`` indexes the DC-centred spectrum at the
    user's own granularity: index 0 is the most negative frequency bin
    ``-n_fft/2`` of that numerology.
    """

    user_index: int
    first_active_subcarrier: int
    m_active: int
    band_start_hz: float
    band_width_hz: float

    @property
    def active_slice(self) -> slice:
        return slice(self.first_active_subcarrier, self.first_active_subcarrier + self.m_active)


def subband_allocation(u: int, config: NumerologyConfig, n_users: int,
                       base: BaseParams | None = None) -> SubbandAllocation:
    """Centre ``config.m_active`` subcarriers inside equal-width subband ``u`` (1-based).

    The system band spans ``n_fft0 * delta_f0`` and is split into ``n_users``
    subbands; whatever the active block leaves over is guard, split evenly
    (an odd leftover puts the spare subcarrier above the block).
    """
    base = base or BaseParams()
    if not 1 <= u <= n_users:
        raise ScenarioError(f"user index {u} outside 1..{n_users}")
    if config.n_fft % n_users:
        raise ScenarioError(f"{n_users} subbands do not tile N={config.n_fft} evenly")
    width = config.n_fft // n_users
    if config.m_active > width:
        raise ScenarioError(
            f"{config.m_active} active subcarriers do not fit a {width}-subcarrier subband")
    guard = (width - config.m_active) // 2
    band_width_hz = base.sample_rate / n_users
    return SubbandAllocation(
        user_index=u,
        first_active_subcarrier=(u - 1) * width + guard,
        m_active=config.m_active,
        band_start_hz=-base.sample_rate / 2 + (u - 1) * band_width_hz,
        band_width_hz=band_width_hz,
    )


@dataclass(frozen=True)
class ScenarioPlan:
    """Validated layout: ``users[i]`` is the user sitting in subband ``i + 1``."""

    users: tuple[tuple[NumerologyConfig, SubbandAllocation], ...]
    candidates: tuple[NumerologyConfig, ...]
    frame_len: int
    cp_ratio: Fraction
    base: BaseParams = field(default_factory=BaseParams)
    subbands: int = 0  # only consulted when ``users`` is empty (geometry-only plan)

    @property
    def n_users(self) -> int:
        return len(self.users) or self.subbands

    @property
    def bits_per_frame(self) -> int:
        return sum(cfg.bits_per_frame for cfg, _ in self.users)

    def config_at(self, u: int) -> NumerologyConfig:
        return self.users[u - 1][0]


def validate_scenario(users: Sequence[tuple[int, int]], base: BaseParams | None = None,
                      candidates: Sequence[int] | None = None) -> ScenarioPlan:
    """Build a :class:`ScenarioPlan` from ``(k, subband position)`` pairs.

    Positions are 1-based and must cover ``1..U`` without repeats. The
    candidate set defaults to the scenario's own numerologies in subband
    order; ``candidates`` may widen it (it must contain every k in use).
    """
    base = base or BaseParams()
    if len(users) < 1:
        raise ScenarioError("a scenario needs at least one user")
    n_users = len(users)
    positions = [int(p) for _, p in users]
    if len(set(positions)) != n_users:
        raise ScenarioError(f"overlapping subbands: positions {positions}")
    if sorted(positions) != list(range(1, n_users + 1)):
        raise ScenarioError(f"subband positions {positions} must cover 1..{n_users}")
    ks = [int(k) for k, _ in users]
    if len(set(ks)) != n_users:
        raise ScenarioError(f"each user needs a distinct numerology, got k={ks}")

    by_position = sorted(zip(positions, ks))
    configs = [derive_numerology(k, base) for _, k in by_position]
    frame_len_frac = max(c.n_fft for c in configs) * (1 + base.alpha)
    if frame_len_frac.denominator != 1:
        raise ScenarioError(f"frame length {frame_len_frac} is not an integer")
    frame_len = int(frame_len_frac)
    for c in configs:
        if c.frame_len != frame_len:
            raise ScenarioError(
                f"k={c.k}: {c.symbols_per_frame} symbols x {c.symbol_len} samples "
                f"!= frame length {frame_len}")

    plan_users = tuple(
        (c, subband_allocation(pos, c, n_users, base)) for (pos, _), c in zip(by_position, configs))

    if candidates is None:
        cand = tuple(configs)
    else:
        missing = set(ks) - {int(k) for k in candidates}
        if missing:
            raise ScenarioError(f"candidate set lacks numerologies in use: {sorted(missing)}")
        cand = tuple(derive_numerology(k, base) for k in dict.fromkeys(int(k) for k in candidates))
    return ScenarioPlan(users=plan_users, candidates=cand, frame_len=frame_len,
                        cp_ratio=base.alpha, base=base)


def blind_plan(candidates: Sequence[int], n_subbands: int,
               base: BaseParams | None = None) -> ScenarioPlan:
    """Geometry-only plan for captures whose user layout is unknown."""
    base = base or BaseParams()
    if n_subbands < 1:
        raise ScenarioError("need at least one subband")
    cand = tuple(derive_numerology(k, base) for k in dict.fromkeys(int(k) for k in candidates))
    if not cand:
        raise ScenarioError("candidate set is empty")
    for c in cand:
        subband_allocation(1, c, n_subbands, base)
    frame_len = max(c.symbol_len for c in cand)
    return ScenarioPlan(users=(), candidates=cand, frame_len=frame_len,
                        cp_ratio=base.alpha, base=base, subbands=n_subbands)


SCENARIOS = {
    "scenario1": [(0, 1), (1, 2)],
    "scenario2": [(0, 1), (2, 2)],
}


def scenario(name: str, base: BaseParams | None = None,
             candidates: Sequence[int] | None = None) -> ScenarioPlan:
    """One of the two reference two-user layouts (15 kHz mixed with 30 or 60 kHz)."""
    try:
        users = SCENARIOS[name]
    except KeyError:
        raise ScenarioError(f"unknown scenario {name!r}; known: {sorted(SCENARIOS)}") from None
    return validate_scenario(users, base, candidates)
