"""Subword complexity and its frequency-thresholded variant."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..seqcore.core import Sequence


@dataclass
class ComplexityProfile:
    lengths: tuple
    p: tuple
    p_tilde: tuple | None
    p_tilde_half: tuple | None
    tau: float | None
    N: int

    def rows(self) -> list[tuple]:
        out = []
        for j, L in enumerate(self.lengths):
            pt = self.p_tilde[j] if self.p_tilde is not None else ""
            ph = self.p_tilde_half[j] if self.p_tilde_half is not None else ""
            out.append((L, self.p[j], pt, ph))
        return out


def window_ids(codes: np.ndarray, A: int, lmax: int):
    """Yield ``(L, ids)`` where equal ids mean equal length-``L`` windows.

    Ids are exact packed codes while ``A^L`` fits in 62 bits; beyond that, the
    previous ids are densely ranked before extension.
    """
    codes = codes.astype(np.int64)
    ids = codes.copy()
    packed, span = True, A
    yield 1, ids
    for L in range(2, lmax + 1):
        if codes.size - L + 1 <= 0:
            return
        if packed and span * A >= (1 << 62):
            packed = False
        if not packed:
            _, ids = np.unique(ids, return_inverse=True)
            ids = ids.astype(np.int64)
        ids = ids[:-1] * A + codes[L - 1:]
        span *= A
        yield L, ids


def _profile(codes, A, lmax, N, tau=None):
    p, pt, ph = [], [], []
    half = N // 2
    for L, ids in window_ids(codes, A, lmax):
        starts = max(0, N - L)  # windows at n < N - L
        u, cnt = np.unique(ids[:starts], return_counts=True)
        p.append(int(u.size))
        if tau is not None:
            pt.append(int(np.count_nonzero(cnt / N >= tau)))
            hs = max(0, half - L)
            _, ch = np.unique(ids[:hs], return_counts=True)
            ph.append(int(np.count_nonzero(ch / max(half, 1) >= tau)))
    return p, pt, ph


def subword_complexity(a: Sequence, l_max: int, N: int, workers: int = 1) -> ComplexityProfile:
    if not 1 <= l_max < N:
        raise ValueError("need 1 <= l_max < N")
    codes = a.codes_range(N, workers=workers)
    p, _, _ = _profile(codes, a.alphabet.size, l_max, N)
    return ComplexityProfile(tuple(range(1, len(p) + 1)), tuple(p), None, None, None, N)


def asymptotic_subword_complexity(a: Sequence, l_max: int, N: int, tau: float = 1e-3,
                                  workers: int = 1) -> ComplexityProfile:
    """Words whose window frequency at ``N`` is at least ``tau``, with the same count at ``N/2``."""
    if tau <= 0:
        raise ValueError("tau must be positive")
    if not 1 <= l_max < N:
        raise ValueError("need 1 <= l_max < N")
    codes = a.codes_range(N, workers=workers)
    p, pt, ph = _profile(codes, a.alphabet.size, l_max, N, tau)
    return ComplexityProfile(tuple(range(1, len(p) + 1)), tuple(p), tuple(pt), tuple(ph), tau, N)
