"""Sequences constant on smooth intervals with prescribed growth."""

from __future__ import annotations

from functools import lru_cache
from typing import Callable

import numpy as np

from ..seqcore.smooth import smooth_enumeration
from ..seqcore.core import INDEX_MAX
from .linrep import NumericSequence


def default_exponent_map(f: Callable[[int], int]) -> Callable[[int], int]:
    """``F(beta) = f(3^(3^(beta+1)) - 1)`` for non-decreasing ``f``.

    Then ``F(beta_i) >= f(n)`` for ``n < 3^(3^(beta_i+1))``, so a patch is
    needed only where ``beta_i`` is below roughly ``log_3 log_3 n``, a set of
    intervals whose density tends to zero.
    """

    @lru_cache(maxsize=None)
    def F(beta: int) -> int:
        return f(3 ** (3 ** (beta + 1)) - 1)

    return F


def _table(top: int):
    rows = smooth_enumeration(max(1, min(top, INDEX_MAX)))
    return (np.array([r[0] for r in rows], dtype=np.int64), np.array([r[2] for r in rows], dtype=np.int64))


def fast_growth_sequence(F: Callable[[int], int] | None = None, f: Callable[[int], int] | None = None) -> NumericSequence:
    """``a_n = F(beta_i)`` on ``[H_i, H_{i+1})`` and ``a_0 = F(0)``."""
    if F is None:
        if f is None:
            raise ValueError("need an exponent map F or a target function f")
        F = default_exponent_map(f)
    cache: dict = {}

    def Fc(b):
        if b not in cache:
            cache[b] = F(int(b))
        return cache[b]

    prev = None
    for b in range(4):
        v = Fc(b)
        if prev is not None and v < prev:
            raise ValueError("F must be non-decreasing")
        prev = v

    def fn(idx):
        if idx.size == 0:
            return np.zeros(0, dtype=object)
        H, B = _table(int(idx.max()))
        i = np.searchsorted(H, np.maximum(idx, 1), side="right") - 1
        betas = B[i]
        out = np.empty(idx.size, dtype=object)
        for b in np.unique(betas).tolist():
            out[betas == b] = Fc(b)
        return out

    return NumericSequence(fn, "fast_growth")


def max_patch(a: NumericSequence, f: Callable[[int], int]) -> NumericSequence:
    """``a'_n = max(a_n, f(n))``."""

    def fn(idx):
        base = a.values(idx)
        return np.array([max(x, f(int(n))) for x, n in zip(base.tolist(), idx.tolist())], dtype=object)

    return NumericSequence(fn, f"max({a.tag}, f)")


def patch_density(a: NumericSequence, f: Callable[[int], int], checkpoints) -> list[float]:
    """Share of ``n < c`` where the patch changes the value (``f(n) > a_n``)."""
    N = max(checkpoints)
    base = a.values(np.arange(N, dtype=np.int64)).tolist()
    changed = np.array([f(n) > x for n, x in enumerate(base)], dtype=bool)
    cs = np.concatenate([[0], np.cumsum(changed)])
    return [int(cs[c]) / c for c in checkpoints]
