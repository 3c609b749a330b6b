"""
A small Monte-Carlo sweep
=========================

Run a reduced AWGN sweep, compare it against the closed-form curves, and
write the CSV plus its JSON sidecar. The `mixnum sweep` command does the
same from a config file.
"""

# %%
import tempfile
from pathlib import Path

from mixnum.sim import SimConfig, emit_results, run_sweep

config = SimConfig(scenario="scenario1", channel="awgn", snr_db=(-4.0, 0.0, 4.0, 8.0),
                   trials=50, seed=1)
rows = run_sweep(config)

# %%
print(" SNR  joint   BER blind   BER non-blind   1/2 Q(sqrt(2 SNR))")
for r in rows:
    print(f"{r.snr_db:4.0f}  {r.joint_success_rate:5.2f}  {r.ber_blind:10.2e}  "
          f"{r.ber_nonblind:14.2e}  {r.ber_theory_awgn:18.2e}")

# %%
out = Path(tempfile.mkdtemp()) / "results.csv"
emit_results(rows, out, config)
print(out.read_text())
print(f"sidecar: {out.with_suffix('.json')}")
