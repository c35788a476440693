"""Log-averages over smooth intervals."""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from ..seqcore.core import Sequence
from ..seqcore.smooth import (
    SmoothSchedule,
    _log_window_ok,
    harmonic_diff,
    harmonic_exact,
    iter_smooth_below,
)
from .frequency import log_average

EXACT_LIMIT = 1 << 14


@dataclass
class LogOscResult:
    j: int
    passed: bool
    value: float | None
    exponent: int | None  # N = 3^exponent
    window: str

    def to_dict(self) -> dict:
        return {"j": self.j, "passed": self.passed, "value": self.value, "N": f"3^{self.exponent}",
                "window": self.window}


def window_text(j: int) -> str:
    if j % 2 == 1:
        return f"[0, 2^-{j})"
    return f"(1 - 2^-{j}, 1]"


def log_osc_check(a: Sequence, sched: SmoothSchedule, j: int) -> LogOscResult:
    """Log-average of the symbol 1 at ``N = 3^gamma_j`` against its target window."""
    if j == 0:
        return LogOscResult(0, True, None, None, "vacuous")
    if not 1 <= j < len(sched.gamma):
        raise ValueError(f"level {j} is outside the schedule")
    e = sched.gamma[j]
    val = log_average(a, 3**e, symbol_code=a.alphabet.code(1))
    return LogOscResult(j, _log_window_ok(j, val), val, e, window_text(j))


@dataclass
class SmoothMass:
    beta: int
    K: int
    H_K: int
    S_K: float
    ratio: float
    exact: Fraction | None  # S_K as a rational when H_K is small


def smooth_log_mass(beta: int, K: int) -> SmoothMass:
    """``S_K / log H_K`` where ``S_K`` sums ``1/(n+1)`` over ``[H_i, H_{i+1})``, ``i < K``, ``beta_i = beta``."""
    if beta < 0 or K < 1:
        raise ValueError("need beta >= 0 and K >= 1")
    seq = []
    limit = 2
    while True:
        seq = list(iter_smooth_below(limit))
        if len(seq) > K:
            break
        limit *= 4
    H = [h for h, _, _ in seq]
    parts, exact = [], Fraction(0)
    use_exact = H[K] <= EXACT_LIMIT
    for i in range(K):
        if seq[i][2] == beta:
            parts.append(harmonic_diff(H[i], H[i + 1]))
            if use_exact:
                exact += harmonic_exact(H[i], H[i + 1])
    S = float(exact) if use_exact else math.fsum(parts)
    ratio = S / math.log(H[K]) if H[K] > 1 else 0.0
    return SmoothMass(beta, K, H[K], S, ratio, exact if use_exact else None)


def smooth_log_mass_at(beta: int, H_limit: int) -> SmoothMass:
    """Same ratio with ``K`` chosen as the index of the largest smooth number ``<= H_limit``."""
    K = sum(1 for _ in iter_smooth_below(H_limit + 1)) - 1
    return smooth_log_mass(beta, K)
