"""Deterministic finite automata with output (most-significant digit first)."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numba
import numpy as np

from .core import Alphabet, Sequence, SequenceError


class MalformedDFAO(SequenceError):
    pass


@dataclass(frozen=True)
class DFAO:
    k: int
    delta: tuple  # delta[q][d]
    q0: int
    tau: tuple  # tau[q] is a symbol code
    alphabet: Alphabet
    name: str = "dfao"

    def __post_init__(self):
        Q = len(self.delta)
        if self.k < 2:
            raise MalformedDFAO("base must be at least 2")
        if Q == 0 or len(self.tau) != Q:
            raise MalformedDFAO("transition and output tables must cover every state")
        if not 0 <= self.q0 < Q:
            raise MalformedDFAO("initial state out of range")
        for q, row in enumerate(self.delta):
            if len(row) != self.k:
                raise MalformedDFAO(f"state {q} has {len(row)} transitions, expected {self.k}")
            for t in row:
                if not 0 <= t < Q:
                    raise MalformedDFAO(f"transition from state {q} leaves the state set")
        for t in self.tau:
            if not 0 <= t < self.alphabet.size:
                raise MalformedDFAO("output code outside the alphabet")

    @property
    def states(self) -> int:
        return len(self.delta)

    def table(self) -> np.ndarray:
        return np.asarray(self.delta, dtype=np.int64)

    def run(self, digits, q=None) -> int:
        q = self.q0 if q is None else q
        for d in digits:
            if not 0 <= d < self.k:
                raise MalformedDFAO(f"digit {d} out of range for base {self.k}")
            q = self.delta[q][d]
        return q

    def normalized(self) -> "DFAO":
        """Equivalent automaton whose value is unchanged by leading zeros.

        A fresh initial state loops on 0 and otherwise behaves like ``q0``.
        """
        if self.delta[self.q0][0] == self.q0:
            return self
        Q = self.states
        row = tuple(Q if d == 0 else self.delta[self.q0][d] for d in range(self.k))
        return DFAO(self.k, tuple(self.delta) + (row,), Q, tuple(self.tau) + (self.tau[self.q0],),
                    self.alphabet, self.name)

    def reachable(self) -> list[int]:
        seen = [self.q0]
        mark = {self.q0}
        for q in seen:
            for t in self.delta[q]:
                if t not in mark:
                    mark.add(t)
                    seen.append(t)
        return sorted(mark)


def digits_msd(n: int, k: int) -> list[int]:
    if n == 0:
        return []
    out = []
    while n:
        n, d = divmod(n, k)
        out.append(d)
    return out[::-1]


def _chunk_table(delta: np.ndarray, k: int, s: int) -> np.ndarray:
    """``T[q, c]``: state after reading the ``s`` base-``k`` digits of ``c`` from ``q``, most significant first."""
    Q = delta.shape[0]
    T = np.repeat(np.arange(Q, dtype=np.int64)[:, None], k**s, axis=1)
    c = np.arange(k**s, dtype=np.int64)
    for j in reversed(range(s)):
        d = (c // k**j) % k
        T = delta[T, d[None, :]]
    return T


@numba.njit(cache=True, nogil=True)
def _run_chunks(idx, T, tau, q0, chunk, top_power):
    out = np.empty(idx.shape[0], np.int64)
    for t in range(idx.shape[0]):
        n = idx[t]
        q = q0
        p = top_power
        while p > 0:
            q = T[q, (n // p) % chunk]
            p //= chunk
        out[t] = tau[q]
    return out


def dfao_sequence(m: DFAO, k: int | None = None) -> Sequence:
    """``a_n = tau(delta*(q0, (n)_k))`` with ``a_0 = tau(q0)``."""
    if k is not None and k != m.k:
        raise MalformedDFAO(f"automaton reads base {m.k}, not {k}")
    norm = m.normalized()
    delta = norm.table()
    tau = np.asarray(norm.tau, dtype=np.int64)
    base = m.k
    s = max(1, int(math.log(4096, base)))  # digits per lookup
    T = _chunk_table(delta, base, s)
    chunk = base**s

    def fn(idx):
        if idx.size == 0:
            return np.zeros(0, dtype=np.int64)
        top = int(idx.max())
        p = 1
        while p * chunk <= top:
            p *= chunk
        return _run_chunks(np.ascontiguousarray(idx, dtype=np.int64), T, tau, norm.q0, chunk, p)

    return Sequence(m.alphabet, fn, m.name, {"k": m.k}, dfao=m)


def _binary(name, delta, tau, symbols=(0, 1), q0=0, k=2):
    return DFAO(k, tuple(tuple(r) for r in delta), q0, tuple(tau), Alphabet(tuple(symbols)), name)


def constant_dfao(k: int = 2) -> DFAO:
    return DFAO(k, ((0,) * k,), 0, (0,), Alphabet((0,)), "constant")


def thue_morse_dfao() -> DFAO:
    return _binary("thue_morse", [[0, 1], [1, 0]], [0, 1])


def period_doubling_dfao() -> DFAO:
    # A (output 0), B (output 1): A-0->A, A-1->B, B-0->A, B-1->A
    return _binary("period_doubling", [[0, 1], [0, 0]], [0, 1])


def rudin_shapiro_dfao() -> DFAO:
    # state 2*p + b: b the last bit read, p the parity of "11" factors so far
    delta = [[0, 1], [0, 3], [2, 3], [2, 1]]
    return _binary("rudin_shapiro", delta, [0, 0, 1, 1])


def mod3_dfao() -> DFAO:
    delta = [[(2 * s + d) % 3 for d in range(2)] for s in range(3)]
    return DFAO(2, tuple(tuple(r) for r in delta), 0, (0, 1, 2), Alphabet.range(3), "mod3")


BUILTIN_DFAOS = {
    "constant": constant_dfao,
    "thue_morse": thue_morse_dfao,
    "period_doubling": period_doubling_dfao,
    "rudin_shapiro": rudin_shapiro_dfao,
    "mod3": mod3_dfao,
}


def thue_morse() -> Sequence:
    return dfao_sequence(thue_morse_dfao())


def period_doubling() -> Sequence:
    return dfao_sequence(period_doubling_dfao())


def rudin_shapiro() -> Sequence:
    return dfao_sequence(rudin_shapiro_dfao())
