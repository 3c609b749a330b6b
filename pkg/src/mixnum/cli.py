"""Command line: ``mixnum sweep`` and ``mixnum classify``."""

from __future__ import annotations

import argparse
import json
import logging
import sys
from dataclasses import replace
from pathlib import Path

from .errors import MixnumError
from .numerology import BaseParams
from .sim import IQ_FORMATS, classify_iq_file, emit_results, load_config, run_sweep


def parse_base(text: str | None) -> BaseParams:
    """``"delta_f0=15000,n_fft0=4096,m_active0=1024,alpha=1/16"`` -> BaseParams."""
    if not text:
        return BaseParams()
    fields = {}
    for item in text.split(","):
        key, sep, value = item.partition("=")
        if not sep:
            raise argparse.ArgumentTypeError(f"expected key=value, got {item!r}")
        fields[key.strip()] = value.strip()
    casts = {"delta_f0": float, "n_fft0": int, "m_active0": int, "frame_symbol_budget": int,
             "alpha": str}
    unknown = set(fields) - set(casts)
    if unknown:
        raise argparse.ArgumentTypeError(f"unknown base parameter(s): {sorted(unknown)}")
    try:
        return BaseParams.from_dict({k: casts[k](v) for k, v in fields.items()})
    except (ValueError, ZeroDivisionError) as exc:
        raise argparse.ArgumentTypeError(str(exc)) from exc


def parse_candidates(text: str) -> list[int]:
    try:
        return [int(k) for k in text.split(",") if k.strip()]
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"bad candidate list {text!r}") from exc


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="mixnum", description=__doc__)
    p.add_argument("-v", "--verbose", action="store_true")
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("sweep", help="Monte-Carlo SNR sweep to CSV + JSON sidecar")
    s.add_argument("--config", required=True, type=Path)
    s.add_argument("--out", required=True, type=Path, help="output directory")
    s.add_argument("--trials", type=int)
    s.add_argument("--seed", type=int)
    s.add_argument("--jobs", type=int, default=1)

    c = sub.add_parser("classify", help="blind identification of an IQ capture")
    c.add_argument("--in", dest="input", required=True, type=Path)
    c.add_argument("--format", required=True, choices=sorted(IQ_FORMATS))
    c.add_argument("--base", type=parse_base, default=BaseParams())
    c.add_argument("--candidates", required=True, type=parse_candidates)
    c.add_argument("--subbands", type=int, help="number of equal subbands (default: one per candidate)")
    return p


def _sweep(args) -> int:
    config = load_config(args.config)
    overrides = {k: v for k, v in (("trials", args.trials), ("seed", args.seed)) if v is not None}
    if overrides:
        config = replace(config, **overrides)
    rows = run_sweep(config, jobs=args.jobs)
    args.out.mkdir(parents=True, exist_ok=True)
    path = emit_results(rows, args.out / "results.csv", config)
    for r in rows:
        print(f"{r.snr_db:6.1f} dB  joint={r.joint_success_rate:.4f}  "
              f"ber_blind={r.ber_blind:.3e}  ber_nonblind={r.ber_nonblind:.3e}")
    print(f"wrote {path} and {path.with_suffix('.json')}")
    return 0


def _classify(args) -> int:
    _, text, report = classify_iq_file(args.input, args.format, args.candidates, args.base,
                                       args.subbands)
    print(text)
    print(json.dumps(report, indent=2))
    return 0


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        return _sweep(args) if args.command == "sweep" else _classify(args)
    except (MixnumError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
