"""Exact k-kernels of automatic sequences.

For a DFAO read most-significant digit first, the kernel element at the
residue word ``w`` is ``n -> tau(delta(s_n, w))`` where ``s_n`` is the state
reached on ``(n)_k``. It is determined by the map ``g_w = tau o delta_w`` on
the states reachable from the (leading-zero normalized) initial state, and
``g_{dw} = g_w o delta(., d)``. Distinct maps give distinct sequences because
every reachable state is reached by some ``n``.
"""

from __future__ import annotations

from dataclasses import dataclass

from ..seqcore.dfao import DFAO, digits_msd


@dataclass
class ExactKernel:
    size: int
    functions: list  # class index -> tuple of outputs on reachable states
    first_word: list  # class index -> shortest, least residue word
    states: list  # reachable states of the normalized automaton

    def class_of(self, m: DFAO, word: str) -> int:
        norm = m.normalized()
        g = _word_function(norm, self.states, word)
        return self.functions.index(g)


def _word_function(norm: DFAO, states: list, word: str) -> tuple:
    out = []
    for s in states:
        q = s
        for ch in word:
            q = norm.delta[q][int(ch)]
        out.append(norm.tau[q])
    return tuple(out)


def exact_kernel_dfao(m: DFAO, k: int | None = None) -> ExactKernel:
    if k is not None and k != m.k:
        raise ValueError(f"automaton reads base {m.k}, not {k}")
    norm = m.normalized()
    states = norm.reachable()
    pos = {s: j for j, s in enumerate(states)}
    succ = [[pos[norm.delta[s][d]] for s in states] for d in range(m.k)]
    g0 = tuple(norm.tau[s] for s in states)
    funcs, words = [g0], [""]
    seen = {g0: 0}
    frontier = [0]
    while frontier:
        nxt = []
        for c in frontier:
            g, w = funcs[c], words[c]
            for d in range(m.k):
                h = tuple(g[succ[d][j]] for j in range(len(states)))
                if h not in seen:
                    seen[h] = len(funcs)
                    funcs.append(h)
                    words.append(str(d) + w)
                    nxt.append(seen[h])
        frontier = nxt
    return ExactKernel(len(funcs), funcs, words, states)


def kernel_diameter(m: DFAO) -> int:
    """Longest shortest residue word needed to reach a kernel class."""
    ek = exact_kernel_dfao(m)
    return max(len(w) for w in ek.first_word)


def affine_kernel_size(m: DFAO, q: int, r: int) -> int:
    """Number of distinct kernel sequences of ``n -> a_{qn + r}`` (``r >= 0``).

    Built on the least-significant-digit automaton that reads ``n`` while
    producing the digits of ``qn + r`` with a carry; its state is the carry and
    the transformation ``delta_w`` of the digits emitted so far. Distinct kernel
    sequences are the Moore classes of the reachable states.
    """
    norm = m.normalized()
    k, Q = m.k, norm.states
    ident = tuple(range(Q))

    def step(state, d):
        c, T = state
        x = q * d + c
        e, c2 = x % k, x // k
        # delta_{e w}(s) = delta_w(delta(s, e))
        T2 = tuple(T[norm.delta[s][e]] for s in range(Q))
        return (c2, T2)

    def output(state):
        c, T = state
        s = norm.q0
        for d in digits_msd(c, k):
            s = norm.delta[s][d]
        return norm.tau[T[s]]

    start = (r, ident)
    order, index = [start], {start: 0}
    for st in order:
        for d in range(k):
            t = step(st, d)
            if t not in index:
                index[t] = len(order)
                order.append(t)
    trans = [[index[step(st, d)] for d in range(k)] for st in order]
    part = [output(st) for st in order]
    while True:
        sig = [(part[i],) + tuple(part[trans[i][d]] for d in range(k)) for i in range(len(order))]
        relabel: dict = {}
        new = [relabel.setdefault(s, len(relabel)) for s in sig]
        if len(relabel) == len(set(part)):
            break
        part = new
    return len(set(part))
