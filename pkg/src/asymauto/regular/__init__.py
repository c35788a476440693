"""k-regular sequences: linear representations, kernel rank, recurrences."""

from .growth import fast_growth_sequence, max_patch, patch_density
from .linrep import LinearRepresentation, NumericSequence, invertibility_check, lambda_op, linrep_eval
from .rank import RecurrenceWitness, detect_linear_recurrence, kernel_rank

__all__ = [
    "LinearRepresentation", "NumericSequence", "RecurrenceWitness", "detect_linear_recurrence",
    "fast_growth_sequence", "invertibility_check", "kernel_rank", "lambda_op", "linrep_eval", "max_patch",
    "patch_density",
]
