"""Binary sequences with a prescribed natural frequency of the symbol 1.

The binary expansion of ``n`` splits greedily as ``u^(1) u^(2) ... u^(r) v``
where ``u^(i)`` is the shortest block ending in 1 that contains exactly ``i``
ones. The value ``a_n`` is a selector ``f`` applied to the last full block.
"""

from __future__ import annotations

import math
from functools import lru_cache

import numba
import numpy as np

from ..reals import Real, floor_mul
from .core import Alphabet, Sequence, SequenceError

LMAX = 64


def weight_level(s: int) -> int:
    """The unique ``r`` with ``r(r+1)/2 <= s <= (r^2+3r)/2``."""
    r = (math.isqrt(8 * s + 1) - 1) // 2
    return r


def decompose_binary(n: int) -> tuple[int, list[str], str]:
    if n < 0:
        raise SequenceError("n must be non-negative")
    if n == 0:
        return 0, [], ""
    bits = bin(n)[2:]
    r = weight_level(bits.count("1"))
    blocks, pos = [], 0
    for i in range(1, r + 1):
        ones, j = 0, pos
        while ones < i:
            ones += bits[j] == "1"
            j += 1
        blocks.append(bits[pos:j])
        pos = j
    return r, blocks, bits[pos:]


def word_rank(w: str) -> int:
    """0-based position of ``w`` among words of its length and weight, ordered numerically."""
    rank, c = 0, 0
    for p, ch in enumerate(reversed(w)):
        if ch == "1":
            c += 1
            rank += math.comb(p, c)
    return rank


def f_canonical(w: str, theta) -> int:
    th = Real.parse(theta)
    m, r = len(w), w.count("1")
    cut = floor_mul(th, math.comb(m, r))
    return 1 if word_rank(w) < cut else 0


def f_terminal(w: str, theta) -> int:
    """Selector counted only over words ending in 1, the shape every block ``u^(i)`` has.

    ``f(w) = 1`` iff ``w[:-1]`` ranks below ``floor(theta C(m-1, r-1))``.
    Words not ending in 1 never occur as blocks and map to 0.
    """
    if not w or w[-1] != "1":
        return 0
    th = Real.parse(theta)
    m, r = len(w), w.count("1")
    cut = floor_mul(th, math.comb(m - 1, r - 1))
    return 1 if word_rank(w[:-1]) < cut else 0


SELECTORS = {"canonical": f_canonical, "terminal": f_terminal}


@lru_cache(maxsize=64)
def _tables(a, b, d):
    th = Real(a, b, d)
    C = np.zeros((LMAX + 1, LMAX + 1), dtype=np.int64)
    thr = np.zeros((LMAX + 1, LMAX + 1), dtype=np.int64)
    for m in range(LMAX + 1):
        for r in range(m + 1):
            c = math.comb(m, r)
            C[m, r] = c
            thr[m, r] = floor_mul(th, c)
    return C, thr


@numba.njit(cache=True, nogil=True)
def _theta_codes(idx, C, thr, terminal):
    out = np.zeros(idx.shape[0], np.uint8)
    for t in range(idx.shape[0]):
        n = idx[t]
        if n <= 0:
            continue
        s = 0
        x = n
        while x:
            x &= x - 1
            s += 1
        r = 0
        while (r + 1) * (r + 2) // 2 <= s:
            r += 1
        T = r * (r + 1) // 2
        # ones of u^(r), counted from the least significant end: lo..hi
        lo = s - T + 1
        hi = s - T + r
        c = 0
        pos = 0
        pend = -1
        ptop = -1
        rank = 0
        rank_t = 0
        x = n
        while x:
            if x & 1:
                c += 1
                if c == lo:
                    pend = pos
                if c >= lo and c <= hi:
                    rank += C[pos - pend, c - lo + 1]
                    if c > lo:
                        rank_t += C[pos - pend - 1, c - lo]
                if c == hi + 1:
                    ptop = pos
                    break
            x >>= 1
            pos += 1
        if ptop < 0:
            ptop = pos
        m = ptop - pend
        if terminal:
            if rank_t < thr[m - 1, r - 1]:
                out[t] = 1
        elif rank < thr[m, r]:
            out[t] = 1
    return out


def theta_frequency_sequence(theta, selector: str = "canonical") -> Sequence:
    """``a_n = f(u^(r(n)))`` for ``n >= 1`` and ``a_0 = 0``.

    ``selector="canonical"`` ranks ``u^(r)`` among all words of its length and
    weight. Since blocks always end in 1, the share of ones inside a cell then
    differs from ``theta`` by a bias of order ``1/|u^(r)|``, and block lengths
    grow like ``2 sqrt(log_2 n)``. ``selector="terminal"`` ranks among words
    ending in 1 only, which removes that bias.
    """
    th = Real.parse(theta)
    if th.sign() < 0 or Real(th.a - 1, th.b, th.d).sign() > 0:
        raise SequenceError(f"theta must lie in [0, 1], got {th}")
    if selector not in SELECTORS:
        raise SequenceError(f"unknown selector {selector!r}")
    C, thr = _tables(th.a, th.b, th.d)
    terminal = selector == "terminal"

    def fn(idx):
        return _theta_codes(np.ascontiguousarray(idx, dtype=np.int64), C, thr, terminal)

    params = {"theta": str(th)}
    if terminal:
        params["selector"] = selector
    return Sequence(Alphabet((0, 1)), fn, "theta_frequency", params)
