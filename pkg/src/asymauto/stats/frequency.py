"""Natural and logarithmic frequencies of words by exact window counting."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from ..kernel.discrepancy import DiscrepancyReport, default_ladder, report_from_mismatch
from ..seqcore.core import Sequence
from ..seqcore.smooth import harmonic_diff

RUNS_THRESHOLD = 1 << 26


@dataclass
class FrequencyEstimate:
    word: tuple
    kind: str  # natural | log
    checkpoints: tuple
    counts: tuple  # occurrence counts (natural) or weighted sums (log)
    densities: tuple
    normalization: str = "count"

    def to_dict(self) -> dict:
        return {"word": list(self.word), "kind": self.kind, "normalization": self.normalization,
                "checkpoints": list(self.checkpoints), "counts": list(self.counts),
                "densities": [float(d) for d in self.densities]}


def _word_codes(a: Sequence, w) -> np.ndarray:
    if isinstance(w, str) and all(ch.isdigit() for ch in w) and a.alphabet.is_numeric():
        w = [int(ch) for ch in w]
    return np.array([a.alphabet.code(s) for s in w], dtype=np.int64)


def match_mask(codes: np.ndarray, wc: np.ndarray) -> np.ndarray:
    """``mask[n]`` is true iff the window at ``n`` equals the word (length ``N - |w| + 1``)."""
    L = wc.size
    M = codes.shape[0] - L + 1
    if M <= 0:
        return np.zeros(0, dtype=bool)
    mask = codes[:M] == wc[0]
    for t in range(1, L):
        mask &= codes[t: t + M] == wc[t]
    return mask


def _ladder(N, checkpoints):
    cps = tuple(int(c) for c in checkpoints) if checkpoints else default_ladder(N)
    if max(cps) > N:
        raise ValueError("checkpoints must not exceed N")
    return cps


def freq(a: Sequence, w, N: int, checkpoints=None, workers: int = 1) -> FrequencyEstimate:
    wc = _word_codes(a, w)
    if wc.size == 0 or wc.size > N:
        raise ValueError("word length must lie in [1, N]")
    cps = _ladder(N, checkpoints)
    mask = match_mask(a.codes_range(N, workers=workers).astype(np.int64), wc)
    cs = np.concatenate([[0], np.cumsum(mask, dtype=np.int64)])
    counts = tuple(int(cs[max(0, c - wc.size + 1)]) for c in cps)
    return FrequencyEstimate(tuple(w), "natural", cps, counts, tuple(k / c for k, c in zip(counts, cps)))


def _harmonic_number(N: int) -> float:
    return harmonic_diff(0, N)


def _normalizer(N: int, normalization: str) -> float:
    if normalization == "log":
        return math.log(N)
    if normalization == "harmonic":
        return _harmonic_number(N)
    raise ValueError(f"unknown normalization {normalization!r}")


def logfreq(a: Sequence, w, N: int, checkpoints=None, normalization: str = "log",
            workers: int = 1) -> FrequencyEstimate:
    """``sum_{n < c, match} 1/(n+1)`` divided by ``log c`` (or by ``H_c``)."""
    wc = _word_codes(a, w)
    cps = _ladder(N, checkpoints)
    if min(cps) < 2:
        raise ValueError("logarithmic density needs checkpoints >= 2")
    if N > RUNS_THRESHOLD:
        sums = tuple(_log_sum_runs(a, wc, c) for c in cps)
    else:
        mask = match_mask(a.codes_range(N, workers=workers).astype(np.int64), wc)
        weights = np.where(mask, 1.0 / np.arange(1, mask.size + 1, dtype=np.float64), 0.0)
        sums = []
        for c in cps:
            m = max(0, c - wc.size + 1)
            sums.append(math.fsum(weights[:m]))
        sums = tuple(sums)
    dens = tuple(s / _normalizer(c, normalization) for s, c in zip(sums, cps))
    return FrequencyEstimate(tuple(w), "log", cps, sums, dens, normalization)


def _log_sum_runs(a: Sequence, wc: np.ndarray, N: int) -> float:
    if not a.has_runs() or wc.size != 1:
        raise ValueError("horizon too large for direct counting; need a single-symbol word on a run-structured sequence")
    target = int(wc[0])
    return math.fsum(harmonic_diff(s, e) for s, e, c in a.runs(N) if c == target)


def log_average(a: Sequence, N: int, symbol_code: int = 1, normalization: str = "log") -> float:
    """``(1/log N) sum_{n<N, a_n = s} 1/(n+1)`` using run structure when available."""
    if a.has_runs():
        s = math.fsum(harmonic_diff(st, en) for st, en, c in a.runs(N) if c == symbol_code)
    else:
        codes = a.codes_range(N)
        s = math.fsum((1.0 / np.arange(1, N + 1))[codes == symbol_code])
    return s / _normalizer(N, normalization)


def shift_invariance(a: Sequence, m: int, N: int, checkpoints=None, eps: float = 0.01,
                     workers: int = 1) -> DiscrepancyReport:
    """Discrepancy between ``(a_n)`` and ``(a_{n+m})``."""
    if m < 1:
        raise ValueError("shift must be at least 1")
    cps = _ladder(N, checkpoints)
    codes = a.codes_range(N + m, workers=workers)
    return report_from_mismatch(codes[:N] != codes[m: m + N], cps, eps)
