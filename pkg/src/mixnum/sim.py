"""Monte-Carlo orchestration, result files and the IQ-capture front door.

Every trial draws from its own RNG stream keyed by ``(seed, snr_db,
trial_index)``, so a sweep's output depends only on its configuration and
not on how trials are spread over worker processes.
"""

from __future__ import annotations

import csv
import json
import logging
import math
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field, fields, replace
from functools import reduce
from pathlib import Path
from typing import Sequence

import numpy as np
import yaml

from .blind_id import IdentificationResult, identify
from .channel import (DEFAULT_PDP, PowerDelayProfile, add_awgn, apply_channel, combine_users,
                      draw_rayleigh_channel)
from .errors import FramingError, InputError, MixnumError, TrialError
from .metrics import SweepRow, Tally, TrialOutcome, row_from_tally
from .numerology import (BaseParams, ScenarioPlan, blind_plan, derive_numerology, scenario,
                         subband_allocation, validate_scenario)
from .receiver import demodulate_subband
from .waveform import assemble_user_frame

log = logging.getLogger(__name__)

CHANNELS = ("awgn", "rayleigh")
MODES = ("both", "blind", "non-blind")
CSV_HEADER = ("snr_db", "trials", "type_rate", "loc_rate", "joint_rate", "ber_blind",
              "ber_nonblind", "ber_awgn_theory", "ber_rayleigh_theory")


def default_snr_grid() -> list[float]:
    return [float(x) for x in range(-10, 21, 2)]


@dataclass(frozen=True)
class SimConfig:
    scenario: str | None = "scenario1"
    users: tuple[tuple[int, int], ...] | None = None  # (k, subband) pairs; overrides scenario
    candidates: tuple[int, ...] | None = None
    base: BaseParams = field(default_factory=BaseParams)
    channel: str = "awgn"
    pdp: tuple[float, ...] = DEFAULT_PDP
    power_control: bool = False  # rescale each user's drawn taps to unit energy
    snr_db: tuple[float, ...] = field(default_factory=lambda: tuple(default_snr_grid()))
    trials: int = 10_000
    seed: int = 0
    frames: int = 7  # base-numerology frames per observation
    mode: str = "both"

    def __post_init__(self):
        if self.users is not None:
            object.__setattr__(self, "users", tuple((int(k), int(p)) for k, p in self.users))
        if self.candidates is not None:
            object.__setattr__(self, "candidates", tuple(int(k) for k in self.candidates))
        object.__setattr__(self, "snr_db", tuple(float(s) for s in self.snr_db))
        object.__setattr__(self, "pdp", tuple(float(p) for p in self.pdp))
        self.validate()

    def validate(self):
        if self.trials < 1:
            raise InputError(f"trials must be >= 1, got {self.trials}")
        if not self.snr_db:
            raise InputError("SNR grid is empty")
        if any(math.isnan(s) for s in self.snr_db):
            raise InputError("SNR grid contains NaN")
        if self.channel not in CHANNELS:
            raise InputError(f"channel must be one of {CHANNELS}, got {self.channel!r}")
        if self.mode not in MODES:
            raise InputError(f"mode must be one of {MODES}, got {self.mode!r}")
        if self.seed < 0:
            raise InputError("seed must be non-negative")
        if self.users is None and self.scenario is None:
            raise InputError("config needs a scenario name or an explicit user list")
        PowerDelayProfile(self.pdp)
        plan = self.plan()
        need = 2 * max(c.symbol_len for c in plan.candidates)
        if self.frames < 1 or self.frames * plan.frame_len < need:
            raise InputError(f"{self.frames} frame(s) of {plan.frame_len} samples cannot cover "
                             f"two symbol periods of the slowest candidate ({need} samples)")

    def plan(self) -> ScenarioPlan:
        if self.users is not None:
            return validate_scenario(self.users, self.base, self.candidates)
        return scenario(self.scenario, self.base, self.candidates)

    def to_dict(self) -> dict:
        d = asdict(self)
        d["base"] = self.base.to_dict()
        d["users"] = None if self.users is None else [list(u) for u in self.users]
        for key in ("candidates", "snr_db", "pdp"):
            d[key] = None if d[key] is None else list(d[key])
        return d

    @classmethod
    def from_dict(cls, d: dict) -> "SimConfig":
        d = dict(d)
        unknown = set(d) - {f.name for f in fields(cls)}
        if unknown:
            raise InputError(f"unknown config keys: {sorted(unknown)}")
        if "base" in d:
            base = d["base"]
            d["base"] = base if isinstance(base, BaseParams) else BaseParams.from_dict(base or {})
        if isinstance(d.get("snr_db"), dict):
            g = d["snr_db"]
            d["snr_db"] = tuple(np.arange(g["start"], g["stop"] + g["step"] / 2, g["step"]))
        try:
            return cls(**d)
        except (TypeError, ValueError) as exc:
            if isinstance(exc, MixnumError):
                raise
            raise InputError(f"bad config: {exc}") from exc


def load_config(path) -> SimConfig:
    """Read a YAML (or JSON, which YAML accepts) config document."""
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise InputError(f"cannot read config {path}: {exc}") from exc
    try:
        doc = yaml.safe_load(text) or {}
    except yaml.YAMLError as exc:
        raise InputError(f"config {path} is not valid YAML/JSON: {exc}") from exc
    if not isinstance(doc, dict):
        raise InputError(f"config {path} must be a key-value mapping")
    return SimConfig.from_dict(doc)


def _snr_key(snr_db: float) -> int:
    return int.from_bytes(np.float64(snr_db).tobytes(), "little")


def trial_seed_sequence(seed: int, snr_db: float, trial_index: int) -> np.random.SeedSequence:
    return np.random.SeedSequence(seed, spawn_key=(_snr_key(snr_db), int(trial_index)))


def trial_rng(seed: int, snr_db: float, trial_index: int) -> np.random.Generator:
    return np.random.default_rng(trial_seed_sequence(seed, snr_db, trial_index))


def _blind_config(result: IdentificationResult, u: int, plan: ScenarioPlan):
    """Numerology the blind receiver uses for subband ``u``.

    An unclaimed subband falls back to the first candidate no subband
    claimed (or the first candidate outright).
    """
    k = result.subband_numerology[u - 1]
    if k is None:
        claimed = set(result.subband_numerology)
        spare = [c.k for c in plan.candidates if c.k not in claimed]
        k = spare[0] if spare else plan.candidates[0].k
    return derive_numerology(k, plan.base)


def _blind_errors(y, tx_bits, u, result, plan, taps) -> int:
    cfg = _blind_config(result, u, plan)
    alloc = subband_allocation(u, cfg, plan.n_users, plan.base)
    try:
        rx = demodulate_subband(y, cfg, alloc, taps, mode="blind").bits_out
    except FramingError:
        return tx_bits.size
    n = min(rx.size, tx_bits.size)
    return int(np.count_nonzero(rx[:n] != tx_bits[:n])) + (tx_bits.size - n)


def simulate_capture(config: SimConfig, plan: ScenarioPlan, snr_db: float,
                     rng: np.random.Generator):
    """Transmit ``config.frames`` frames from every user through the channel.

    Returns ``(y, bits_per_user, taps_per_user)``; taps are ``None`` on AWGN.
    """
    pdp = PowerDelayProfile(config.pdp)
    signals, bits, taps = [], [], []
    for cfg, alloc in plan.users:
        b = rng.integers(0, 2, size=(config.frames, cfg.bits_per_frame), dtype=np.int8)
        x = np.concatenate([assemble_user_frame(row, cfg, alloc).samples for row in b])
        h = None
        if config.channel == "rayleigh":
            h = draw_rayleigh_channel(pdp, rng)
            if config.power_control:
                h = h / np.linalg.norm(h)
            x = apply_channel(x, h)
        signals.append(x)
        bits.append(b.ravel())
        taps.append(h)
    y, _ = add_awgn(combine_users(signals), snr_db, config.frames * plan.bits_per_frame, rng)
    return y, bits, taps


def run_trial(config: SimConfig, snr_db: float, trial_index: int,
              plan: ScenarioPlan | None = None) -> TrialOutcome:
    plan = plan or config.plan()
    try:
        rng = trial_rng(config.seed, snr_db, trial_index)
        y, bits, taps = simulate_capture(config, plan, snr_db, rng)
        total = sum(b.size for b in bits)

        errors_nb = None
        if config.mode in ("both", "non-blind"):
            errors_nb = 0
            for (cfg, alloc), b, h in zip(plan.users, bits, taps):
                errors_nb += demodulate_subband(y, cfg, alloc, h, "non-blind", b).bit_errors

        type_ok = loc_ok = errors_b = None
        if config.mode in ("both", "blind"):
            result = identify(y, plan)
            type_ok, loc_ok = result.type_correct, result.location_correct
            errors_b = sum(_blind_errors(y, b, u, result, plan, h)
                           for u, (b, h) in enumerate(zip(bits, taps), start=1))
    except MixnumError as exc:
        raise TrialError(snr_db, trial_index, exc) from exc
    return TrialOutcome(snr_db=float(snr_db), seed=config.seed, trial_index=int(trial_index),
                        type_correct=type_ok, location_correct=loc_ok,
                        bit_errors_blind=errors_b, bit_errors_nonblind=errors_nb,
                        total_bits=total)


def _run_chunk(args) -> Tally:
    config, snr_db, start, stop = args
    plan = config.plan()
    return reduce(Tally.merge, (Tally.of(run_trial(config, snr_db, i, plan))
                                for i in range(start, stop)), Tally())


def _chunks(config: SimConfig, jobs: int):
    per = max(1, math.ceil(config.trials / (4 * jobs)))
    for snr in config.snr_db:
        for start in range(0, config.trials, per):
            yield config, snr, start, min(start + per, config.trials)


def run_sweep(config: SimConfig, jobs: int | None = 1) -> list[SweepRow]:
    """One row per SNR point; ``jobs > 1`` spreads trial chunks over processes."""
    jobs = jobs or os.cpu_count() or 1
    tasks = list(_chunks(config, jobs))
    if jobs == 1:
        tallies = map(_run_chunk, tasks)
    else:
        pool = ProcessPoolExecutor(max_workers=jobs)
        tallies = pool.map(_run_chunk, tasks)
    per_snr: dict[float, Tally] = {}
    try:
        for (_, snr, start, stop), t in zip(tasks, tallies):
            per_snr[snr] = per_snr.get(snr, Tally()).merge(t)
            log.debug("snr %.1f dB: trials %d..%d done", snr, start, stop)
    finally:
        if jobs != 1:
            pool.shutdown()
    return [row_from_tally(snr, per_snr[snr]) for snr in config.snr_db]


def _fmt(x: float) -> str:
    return repr(float(x)) if not isinstance(x, int) else str(x)


def emit_results(rows: Sequence[SweepRow], path, config: SimConfig | None = None) -> Path:
    """Write the CSV and, with ``config``, a ``.json`` sidecar next to it."""
    if not rows:
        raise ValueError("no rows to write")
    path = Path(path)
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(CSV_HEADER)
        for r in rows:
            w.writerow([_fmt(r.snr_db), str(r.trials), _fmt(r.type_success_rate),
                        _fmt(r.location_success_rate), _fmt(r.joint_success_rate),
                        _fmt(r.ber_blind), _fmt(r.ber_nonblind), _fmt(r.ber_theory_awgn),
                        _fmt(r.ber_theory_rayleigh)])
    if config is not None:
        path.with_suffix(".json").write_text(json.dumps(config.to_dict(), indent=2) + "\n")
    return path


def read_results(path) -> list[SweepRow]:
    with open(path, newline="") as fh:
        reader = csv.reader(fh)
        header = next(reader)
        if tuple(header) != CSV_HEADER:
            raise InputError(f"unexpected CSV header {header}")
        return [SweepRow(float(r[0]), int(r[1]), *map(float, r[2:])) for r in reader]


# --- IQ files ---------------------------------------------------------------

IQ_FORMATS = {"f32le": np.dtype("<f4"), "i16le": np.dtype("<i2")}


def read_iq_file(path, fmt: str) -> np.ndarray:
    if fmt not in IQ_FORMATS:
        raise InputError(f"unknown IQ format {fmt!r}; use one of {sorted(IQ_FORMATS)}")
    dtype = IQ_FORMATS[fmt]
    try:
        raw = Path(path).read_bytes()
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc}") from exc
    if not raw:
        raise InputError(f"{path} is empty")
    if len(raw) % (2 * dtype.itemsize):
        raise InputError(f"{path}: {len(raw)} bytes is not a whole number of {fmt} I/Q pairs")
    v = np.frombuffer(raw, dtype=dtype).astype(np.float64)
    if fmt == "i16le":
        v /= 32768.0
    return v[0::2] + 1j * v[1::2]


def write_iq_file(path, samples, fmt: str) -> None:
    if fmt not in IQ_FORMATS:
        raise InputError(f"unknown IQ format {fmt!r}")
    samples = np.asarray(samples, dtype=np.complex128)
    inter = np.empty(2 * samples.size)
    inter[0::2], inter[1::2] = samples.real, samples.imag
    if fmt == "i16le":
        peak = np.abs(inter).max(initial=0.0)
        scale = 0.9 * 32767 / peak if peak > 0 else 0.0
        inter = np.round(inter * scale)
    Path(path).write_bytes(inter.astype(IQ_FORMATS[fmt]).tobytes())


def classify_samples(y, candidates: Sequence[int], base: BaseParams | None = None,
                     n_subbands: int | None = None) -> IdentificationResult:
    plan = blind_plan(candidates, n_subbands or len(candidates), base)
    need = 2 * max(c.symbol_len for c in plan.candidates)
    if len(y) < need:
        raise InputError(f"capture holds {len(y)} samples, need at least {need} "
                         f"(two symbol periods of the slowest candidate)")
    return identify(y, plan, truth=False)


def format_report(result: IdentificationResult) -> str:
    lines = []
    for v in result.verdicts:
        c = v.candidate
        lines.append(f"k={c.k} ({c.delta_f / 1e3:g} kHz, N={c.n_fft}): peak distance "
                     f"{v.peaks.estimated_size} -> {'MATCH' if v.matched else 'no match'}")
    if not result.type_estimates:
        lines.append("no numerology matched")
    for k, u in result.location_estimates.items():
        vals = ", ".join(f"{x:.4g}" for x in result.v_values[k])
        lines.append(f"k={k} located in subband {u} (V = [{vals}])")
    return "\n".join(lines)


def classify_iq_file(path, fmt: str, candidates: Sequence[int], base: BaseParams | None = None,
                     n_subbands: int | None = None) -> tuple[IdentificationResult, str, dict]:
    """Run blind identification on a capture; returns (result, text report, JSON report)."""
    y = read_iq_file(path, fmt)
    result = classify_samples(y, candidates, base, n_subbands)
    report = {"file": str(path), "format": fmt, "samples": int(len(y)),
              "candidates": [int(k) for k in candidates], **result.to_dict()}
    report.pop("type_correct")
    report.pop("location_correct")
    return result, format_report(result), report
