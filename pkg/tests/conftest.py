import sys
from pathlib import Path

import numpy as np
import pytest

sys.path.insert(0, str(Path(__file__).parent))

from mixnum.numerology import scenario
from mixnum.waveform import assemble_user_frame
from mixnum.channel import combine_users


def make_capture(plan, rng, frames=2, swap=False):
    """Noiseless composite of ``frames`` frames; returns (y, per-user bits, per-user samples)."""
    signals, bits = [], []
    for cfg, alloc in plan.users:
        b = rng.integers(0, 2, size=(frames, cfg.bits_per_frame), dtype=np.int8)
        signals.append(np.concatenate([assemble_user_frame(r, cfg, alloc).samples for r in b]))
        bits.append(b.ravel())
    return combine_users(signals), bits, signals


@pytest.fixture
def rng():
    return np.random.default_rng(20240601)


@pytest.fixture(scope="session")
def plan1():
    return scenario("scenario1")


@pytest.fixture(scope="session")
def plan2():
    return scenario("scenario2")


def pytest_terminal_summary(terminalreporter):
    acceptance = sys.modules.get("test_acceptance")
    if acceptance is not None and acceptance.REPORT:
        terminalreporter.section("acceptance criteria")
        for line in sorted(acceptance.REPORT, key=lambda s: int(s.split()[1].rstrip(":"))):
            terminalreporter.write_line(line)
