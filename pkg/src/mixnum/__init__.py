"""Mixed-numerology OFDM simulation and blind numerology identification."""

from .blind_id import (IdentificationResult, cp_correlation_metric, estimate_type,
                       find_peak_pair, folded_cp_metric, identify, locate,
                       variation_coefficients)
from .channel import (PowerDelayProfile, add_awgn, apply_channel, combine_users,
                      draw_rayleigh_channel)
from .errors import MixnumError
from .metrics import aggregate, ber_awgn_bpsk, ber_rayleigh_bpsk, q_function
from .numerology import (BaseParams, NumerologyConfig, ScenarioPlan, derive_numerology,
                         scenario, subband_allocation, validate_scenario)
from .receiver import count_bit_errors, demodulate_subband, remove_cp
from .sim import SimConfig, classify_iq_file, emit_results, run_sweep, run_trial
from .waveform import add_cp, assemble_user_frame, build_freq_vector, dft, idft, map_bpsk

__version__ = "0.1.0"
