"""Discrepancy densities and the three-valued asymptotic-equality verdict."""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numba
import numpy as np

from ..seqcore.core import Sequence

EQUAL, DISTINCT, INCONCLUSIVE = "equal", "distinct", "inconclusive"


def default_ladder(N: int) -> tuple[int, ...]:
    pts = sorted({max(1, N // d) for d in (16, 8, 4, 2, 1)})
    return tuple(pts)


def distinct_floor(eps: float) -> float:
    return max(10 * eps, 0.1)


def verdict_rule(densities, eps: float) -> str:
    """``equal``: last density <= eps and the last three are non-increasing.
    ``distinct``: last density >= max(10 eps, 0.1). Otherwise ``inconclusive``."""
    final = densities[-1]
    tail = list(densities[-3:])
    if final <= eps and all(x >= y for x, y in zip(tail, tail[1:])):
        return EQUAL
    if final >= distinct_floor(eps):
        return DISTINCT
    return INCONCLUSIVE


@dataclass
class DiscrepancyReport:
    checkpoints: tuple
    counts: tuple
    densities: tuple
    verdict: str
    eps: float
    complete: bool = True  # False when counting stopped early (distinct certified)
    stopped_at: int | None = None

    def to_dict(self) -> dict:
        return {
            "checkpoints": list(self.checkpoints),
            "counts": list(self.counts),
            "densities": [float(d) for d in self.densities],
            "verdict": self.verdict,
            "eps": self.eps,
            "complete": self.complete,
            "stopped_at": self.stopped_at,
        }


def aligned_codes(a: Sequence, b: Sequence):
    """Translation of ``b``'s codes into ``a``'s coding (-1 for foreign symbols)."""
    if a.alphabet == b.alphabet:
        return None
    return np.array([a.alphabet.code(s) if s in a.alphabet else -1 for s in b.alphabet.symbols],
                    dtype=np.int64)


def report_from_mismatch(mis: np.ndarray, checkpoints, eps: float) -> DiscrepancyReport:
    cs = np.concatenate([[0], np.cumsum(mis, dtype=np.int64)])
    counts = tuple(int(cs[c]) for c in checkpoints)
    dens = tuple(c / n for c, n in zip(counts, checkpoints))
    return DiscrepancyReport(tuple(checkpoints), counts, dens, verdict_rule(dens, eps), eps)


def discrepancy_density(a: Sequence, b: Sequence, N: int, checkpoints=None, eps: float = 0.01,
                        workers: int = 1) -> DiscrepancyReport:
    """Exact counts of ``#{n < c : a_n != b_n}`` at each checkpoint ``c``."""
    cps = tuple(checkpoints) if checkpoints else default_ladder(N)
    if max(cps) > N:
        raise ValueError("checkpoints must not exceed N")
    x = a.codes_range(N, workers=workers).astype(np.int64)
    y = b.codes_range(N, workers=workers).astype(np.int64)
    tr = aligned_codes(a, b)
    if tr is not None:
        y = tr[y]
    return report_from_mismatch(x != y, cps, eps)


@numba.njit(cache=True, nogil=True)
def _strided_mismatch(base, s1, o1, s2, o2, N, cps, stop, block):
    """Mismatch counts between base[o1::s1] and base[o2::s2] on [0, N).

    Stops at the first multiple of ``block`` where the running count reaches
    ``stop``; returns (counts at checkpoints reached, position reached).
    """
    out = np.full(cps.shape[0], -1, np.int64)
    c = 0
    j = 0
    n = 0
    while n < N:
        hi = min(n + block, N)
        for t in range(n, hi):
            if base[o1 + s1 * t] != base[o2 + s2 * t]:
                c += 1
            while j < cps.shape[0] and cps[j] == t + 1:
                out[j] = c
                j += 1
        n = hi
        if c >= stop and n < N:
            break
    return out, n, c


@numba.njit(cache=True, nogil=True)
def _pair_mismatch(x, y, N, cps, stop, block):
    out = np.full(cps.shape[0], -1, np.int64)
    c = 0
    j = 0
    n = 0
    while n < N:
        hi = min(n + block, N)
        for t in range(n, hi):
            if x[t] != y[t]:
                c += 1
            while j < cps.shape[0] and cps[j] == t + 1:
                out[j] = c
                j += 1
        n = hi
        if c >= stop and n < N:
            break
    return out, n, c


def early_report(out, reached, count, N, cps, eps) -> DiscrepancyReport:
    if reached >= N:
        counts = tuple(int(v) for v in out)
        dens = tuple(c / n for c, n in zip(counts, cps))
        return DiscrepancyReport(tuple(cps), counts, dens, verdict_rule(dens, eps), eps)
    known = [(int(c), int(v)) for c, v in zip(cps, out) if v >= 0]
    # the running count already certifies density >= the distinctness floor at N
    return DiscrepancyReport(tuple(c for c, _ in known), tuple(v for _, v in known),
                             tuple(v / c for c, v in known), DISTINCT, eps,
                             complete=False, stopped_at=int(reached))


def stop_count(N: int, eps: float) -> int:
    return int(math.ceil(distinct_floor(eps) * N))
