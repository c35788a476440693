"""Frequencies, subword complexity and multiplicative diagnostics."""

from .complexity import asymptotic_subword_complexity, subword_complexity
from .decompose import greedy_decompose
from .frequency import freq, log_average, logfreq, shift_invariance
from .multiplicative import mult_distance, mult_distance_sq, p_local, p_local_abs2
from .smoothlog import log_osc_check, smooth_log_mass

__all__ = [
    "asymptotic_subword_complexity", "freq", "greedy_decompose", "log_average", "log_osc_check", "logfreq",
    "mult_distance", "mult_distance_sq", "p_local", "p_local_abs2", "shift_invariance", "smooth_log_mass",
    "subword_complexity",
]
