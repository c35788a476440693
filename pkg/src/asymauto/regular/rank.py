"""Kernel rank and linear-recurrence detection in exact arithmetic."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .. import linalg
from .linrep import as_numeric


@dataclass
class KernelRank:
    rank: int
    rank_half: int  # same computation on the first N/2 terms
    depth: int
    N: int

    @property
    def stable(self) -> bool:
        return self.rank == self.rank_half

    @property
    def note(self) -> str:
        if self.stable:
            return f"rank {self.rank} unchanged between N={self.N // 2} and N={self.N}"
        return f"rank {self.rank_half} at N={self.N // 2} but {self.rank} at N={self.N}: N may be too small"


def _exact(v):
    return v if isinstance(v, Fraction) else int(v)


def kernel_rows(a, k: int, depth: int, N: int) -> list[list]:
    num = as_numeric(a)
    rows = []
    n = np.arange(N, dtype=np.int64)
    for i in range(depth + 1):
        for r in range(k**i):
            rows.append([_exact(x) for x in num.values(n * k**i + r).tolist()])
    return rows


def kernel_rank(a, k: int = 2, depth: int = 3, N: int = 256) -> KernelRank:
    """Rank over the rationals of the kernel elements ``(a_{k^i n + r})_{n<N}``, ``i <= depth``."""
    rows = kernel_rows(a, k, depth, N)
    r_full = linalg.rank(rows)
    r_half = linalg.rank([row[: N // 2] for row in rows])
    return KernelRank(r_full, r_half, depth, N)


@dataclass
class RecurrenceWitness:
    order: int
    coefficients: tuple  # t_1, ..., t_d
    horizon: int
    violations: int
    checked: int

    @property
    def violation_density(self) -> float:
        return self.violations / self.checked if self.checked else 0.0

    def csv_row(self) -> tuple:
        return (self.order, " ".join(str(c) for c in self.coefficients), self.horizon, self.violations)

    def to_dict(self) -> dict:
        return {"order": self.order, "coefficients": [str(c) for c in self.coefficients],
                "horizon": self.horizon, "violations": self.violations, "checked": self.checked}


def count_violations(vals: list, coeffs) -> tuple[int, int]:
    d = len(coeffs)
    bad = 0
    checked = max(0, len(vals) - d)
    for n in range(checked):
        acc = sum(t * vals[n + d - 1 - j] for j, t in enumerate(coeffs))
        if acc != vals[n + d]:
            bad += 1
    return bad, checked


def _hankel(vals: list, d: int, lo: int = 0, hi: int | None = None) -> list[list]:
    hi = len(vals) - d if hi is None else hi
    return [[vals[n + d - j] for j in range(d + 1)] for n in range(lo, hi)]


def _coefficients(null: list) -> tuple | None:
    for v in null:
        if v[0] != 0:
            return tuple(-x / v[0] for x in v[1:])
    return None


def detect_linear_recurrence(a, N: int, d_max: int, tolerance: float | None = None):
    """Smallest ``d <= d_max`` with ``a_{n+d} = t_1 a_{n+d-1} + ... + t_d a_n`` on ``[0, N - d)``.

    With ``tolerance`` set, coefficients are fitted on the tail ``[N/2, N - d)``
    and accepted when the violation density over ``[0, N - d)`` is at most the
    tolerance; the result is a measurement, not a proof of asymptotic validity.
    """
    vals = [_exact(x) for x in as_numeric(a).values(np.arange(N, dtype=np.int64)).tolist()]
    for d in range(1, d_max + 1):
        if N - d < d + 1:
            break
        if tolerance is None:
            rows = _hankel(vals, d)
        else:
            rows = _hankel(vals, d, lo=N // 2)
        coeffs = _coefficients(linalg.nullspace(rows, d + 1))
        if coeffs is None:
            continue
        coeffs = tuple(int(c) if isinstance(c, Fraction) and c.denominator == 1 else c for c in coeffs)
        bad, checked = count_violations(vals, coeffs)
        if tolerance is None and bad == 0:
            return RecurrenceWitness(d, coeffs, N, 0, checked)
        if tolerance is not None and checked and bad / checked <= tolerance:
            return RecurrenceWitness(d, coeffs, N, bad, checked)
    return None
