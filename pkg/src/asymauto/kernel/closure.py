"""Closure constructions: products, codings, arithmetic subsequences, running sums."""

from __future__ import annotations

import itertools
import threading
from dataclasses import dataclass

import numba
import numpy as np

from ..seqcore.core import Alphabet, Sequence, SequenceError

PARTIAL_SUM_LIMIT = 1 << 30


def product(a: Sequence, b: Sequence) -> Sequence:
    syms = tuple(itertools.product(a.alphabet.symbols, b.alphabet.symbols))
    nb = b.alphabet.size

    def fn(idx):
        return a.codes(idx).astype(np.int64) * nb + b.codes(idx).astype(np.int64)

    return Sequence(Alphabet(syms), fn, f"({a.tag} x {b.tag})", {"a": a.tag, "b": b.tag})


def coding(a: Sequence, rho) -> Sequence:
    """Letter-to-letter image ``rho(a_n)``; ``rho`` is a dict or a callable."""
    images = []
    for s in a.alphabet.symbols:
        if isinstance(rho, dict):
            if s not in rho:
                raise SequenceError(f"coding is not defined on symbol {s!r}")
            images.append(rho[s])
        else:
            images.append(rho(s))
    out_syms = tuple(dict.fromkeys(images))
    alph = Alphabet(out_syms)
    table = np.array([alph.code(x) for x in images], dtype=np.int64)
    return Sequence(alph, lambda idx: table[a.codes(idx)], f"coding({a.tag})", {"base": a.tag})


def ap_restrict(a: Sequence, q: int, r: int) -> Sequence:
    """``b_n = a_{qn + r}`` where indices below zero read ``a_0``."""
    if q < 1:
        raise SequenceError("step must be at least 1")

    def fn(idx):
        j = idx * q + r
        return a.codes(np.maximum(j, 0))

    return Sequence(a.alphabet, fn, f"{a.tag}[{q}n{r:+d}]", {"base": a.tag, "q": q, "r": r})


@dataclass(frozen=True)
class FiniteMonoid:
    elements: tuple
    table: tuple  # table[i][j] = index of elements[i] * elements[j]
    identity: int

    def __post_init__(self):
        n = len(self.elements)
        T = self.table
        if len(T) != n or any(len(row) != n for row in T):
            raise SequenceError("operation table must be square over the elements")
        if any(not 0 <= x < n for row in T for x in row):
            raise SequenceError("operation table leaves the element set")
        e = self.identity
        if any(T[e][i] != i or T[i][e] != i for i in range(n)):
            raise SequenceError("declared identity is not neutral")
        for i, j in itertools.product(range(n), repeat=2):
            if T[i][j] != T[j][i]:
                raise SequenceError(f"operation is not commutative on ({self.elements[i]!r}, {self.elements[j]!r})")
        for i, j, l in itertools.product(range(n), repeat=3):
            if T[T[i][j]][l] != T[i][T[j][l]]:
                raise SequenceError("operation is not associative")

    def op(self, i: int, j: int) -> int:
        return self.table[i][j]

    @classmethod
    def cyclic(cls, m: int) -> "FiniteMonoid":
        return cls(tuple(range(m)), tuple(tuple((i + j) % m for j in range(m)) for i in range(m)), 0)


@numba.njit(cache=True)
def _running(codes, emb, table, ident):
    out = np.empty(codes.shape[0] + 1, np.int64)
    s = ident
    out[0] = s
    for n in range(codes.shape[0]):
        s = table[s, emb[codes[n]]]
        out[n + 1] = s
    return out


def partial_sums(a: Sequence, monoid: FiniteMonoid, embed=None) -> Sequence:
    """``(S a)_n = a_0 + ... + a_{n-1}`` with ``(S a)_0`` the identity.

    ``embed`` maps symbols of ``a`` to monoid elements (default: the symbol
    itself). The prefix of states is cached and grown by doubling.
    """
    emb_map = embed or {s: s for s in a.alphabet.symbols}
    try:
        emb = np.array([monoid.elements.index(emb_map[s]) for s in a.alphabet.symbols], dtype=np.int64)
    except (KeyError, ValueError) as exc:
        raise SequenceError("alphabet does not embed into the monoid") from exc
    table = np.asarray(monoid.table, dtype=np.int64)
    lock = threading.Lock()
    state = {"prefix": np.array([monoid.identity], dtype=np.int64)}

    def ensure(need: int) -> np.ndarray:
        pre = state["prefix"]
        if need <= pre.shape[0]:
            return pre
        if need > PARTIAL_SUM_LIMIT:
            raise OverflowError("running-sum index beyond the supported prefix")
        with lock:
            pre = state["prefix"]
            if need > pre.shape[0]:
                size = max(1 << 12, pre.shape[0])
                while size < need:
                    size *= 2
                codes = a.codes_range(size - 1)
                state["prefix"] = _running(codes.astype(np.int64), emb, table, monoid.identity)
            return state["prefix"]

    def fn(idx):
        if idx.size == 0:
            return np.zeros(0, dtype=np.int64)
        return ensure(int(idx.max()) + 1)[idx]

    return Sequence(Alphabet(tuple(monoid.elements)), fn, f"sum({a.tag})", {"base": a.tag})
