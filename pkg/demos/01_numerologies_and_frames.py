"""
Scalable numerologies and mixed-numerology frames
=================================================

Derive the three numerologies used throughout the package, then build one
frame in which a 15 kHz user and a 30 kHz user share the band.
"""

# %%
# Each step of k doubles the subcarrier spacing and halves the FFT size.
import numpy as np

from mixnum import derive_numerology, scenario
from mixnum.waveform import assemble_user_frame

for k in range(3):
    c = derive_numerology(k)
    print(f"k={k}: {c.delta_f / 1e3:>4g} kHz  N={c.n_fft:<5} N_cp={c.n_cp:<4} "
          f"M={c.m_active:<5} symbols/frame={c.symbols_per_frame}")

# %%
# A scenario fixes who sits where. Both users fill the same 4352-sample frame.
plan = scenario("scenario1")
rng = np.random.default_rng(0)
signals = []
for cfg, alloc in plan.users:
    bits = rng.integers(0, 2, cfg.bits_per_frame)
    frame = assemble_user_frame(bits, cfg, alloc)
    signals.append(frame.samples)
    print(f"user {alloc.user_index}: k={cfg.k}, {frame.samples.size} samples, "
          f"active bins {alloc.active_slice.start}..{alloc.active_slice.stop - 1} "
          f"of {cfg.n_fft}")

# %%
# The cyclic prefix is a verbatim copy of each symbol's tail.
cfg = plan.users[1][0]
x = signals[1]
for s in range(cfg.symbols_per_frame):
    sym = x[s * cfg.symbol_len:(s + 1) * cfg.symbol_len]
    print(f"symbol {s}: CP equals tail -> {np.array_equal(sym[:cfg.n_cp], sym[-cfg.n_cp:])}")

# %%
# Summing the users gives the composite the receiver sees.
y = signals[0] + signals[1]
print(f"composite: {y.size} samples, mean power {np.mean(np.abs(y) ** 2):.3f}")
