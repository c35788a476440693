"""Greedy splitting of a prefix at rare windows."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from ..seqcore.core import Sequence, SequenceError
from .complexity import window_ids

DAGGER, DOUBLE_DAGGER = "dagger", "double-dagger"
L_PROBE = 64


@dataclass
class Decomposition:
    case: str
    blocks: list  # emitted words w_0, w_1, ... as code arrays
    tail: np.ndarray  # remainder x with no rare window inside
    boundaries: list  # start index of each letter alpha following an emitted block
    prefix: np.ndarray  # analyzed (pruned) prefix
    pruned: dict = field(default_factory=dict)  # dropped code -> replacement code

    def concatenation(self) -> np.ndarray:
        parts = list(self.blocks) + [self.tail]
        return np.concatenate(parts) if parts else np.zeros(0, dtype=self.prefix.dtype)

    def to_dict(self) -> dict:
        return {"case": self.case, "boundaries": list(self.boundaries),
                "block_lengths": [int(b.size) for b in self.blocks], "tail_length": int(self.tail.size),
                "pruned": {str(k): v for k, v in self.pruned.items()}}


def _prune(codes: np.ndarray, A: int, tau: float):
    N = codes.size
    cnt = np.bincount(codes, minlength=A)
    keep = [c for c in range(A) if cnt[c] / N >= tau]
    if not keep:
        raise SequenceError("pruning removed every symbol")
    top = max(keep, key=lambda c: (cnt[c], -c))
    dropped = {c: top for c in range(A) if c not in keep and cnt[c] > 0}
    if dropped:
        codes = codes.copy()
        for c, t in dropped.items():
            codes[codes == c] = t
    return codes, dropped


def rare_window_starts(codes: np.ndarray, A: int, tau: float, l_probe: int = L_PROBE) -> np.ndarray:
    """``start[q]`` = start of the shortest rare window ending at ``q`` (``-1`` if none).

    A window is rare when its occurrence count in the prefix is below ``tau N``.
    """
    N = codes.size
    start = np.full(N, -1, dtype=np.int64)
    for L, ids in window_ids(codes, A, l_probe):
        if L == 1:
            continue
        _, inv, cnt = np.unique(ids, return_inverse=True, return_counts=True)
        rare = cnt[inv] < tau * N
        ends = np.nonzero(rare)[0] + L - 1
        fresh = ends[start[ends] < 0]
        start[fresh] = fresh - L + 1
    return start


def greedy_decompose(a: Sequence, N: int, tau: float = 1e-3, l_probe: int = L_PROBE) -> Decomposition:
    """Emit ``w`` whenever ``w alpha`` is the shortest prefix of the remainder that contains a rare window.

    Rarity of long prefixes is judged through their windows of length at most
    ``l_probe`` (a word is no more frequent than any of its factors).
    """
    codes = a.codes_range(N).astype(np.int64)
    codes, dropped = _prune(codes, a.alphabet.size, tau)
    start = rare_window_starts(codes, a.alphabet.size, tau, l_probe)
    blocks, bounds = [], []
    p = 0
    q = 0
    while True:
        while q < N and start[q] < p:
            q += 1
        if q >= N:
            break
        blocks.append(codes[p:q])
        bounds.append(int(q))
        p = q
    case = DOUBLE_DAGGER if blocks else DAGGER
    return Decomposition(case, blocks, codes[p:], bounds, codes, dropped)
