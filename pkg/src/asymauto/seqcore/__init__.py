"""Finite-alphabet sequences and their generators."""

from .core import Alphabet, Sequence, SequenceError, constant, eval_range, periodic, perturb
from .dfao import BUILTIN_DFAOS, DFAO, dfao_sequence, period_doubling, rudin_shapiro, thue_morse
from .multiplicative import (
    MultiplicativeSpec,
    dirichlet_character,
    klm_form,
    liouville,
    mobius,
    multiplicative_sequence,
)
from .smooth import SmoothSchedule, gamma_schedule, smooth_enumeration, smooth_parity_sequence
from .spec import SequenceSpec, SpecError
from .sturmian import bracket_floor_mod, patched_sturmian, sturmian
from .theta import decompose_binary, f_canonical, theta_frequency_sequence

__all__ = [
    "Alphabet", "BUILTIN_DFAOS", "DFAO", "MultiplicativeSpec", "Sequence", "SequenceError", "SequenceSpec",
    "SmoothSchedule", "SpecError", "bracket_floor_mod", "constant", "decompose_binary", "dfao_sequence",
    "dirichlet_character", "eval_range", "f_canonical", "gamma_schedule", "klm_form", "liouville", "mobius",
    "multiplicative_sequence", "patched_sturmian", "period_doubling", "periodic", "perturb", "rudin_shapiro",
    "smooth_enumeration", "smooth_parity_sequence", "sturmian", "theta_frequency_sequence", "thue_morse",
]
