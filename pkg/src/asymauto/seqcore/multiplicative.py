"""Multiplicative sequences with values in {0} and the roots of unity of a fixed order.

A value is stored as an exponent ``e`` (meaning ``exp(2 pi i e / order)``) or
``-1`` for zero. Tables are assembled from a smallest-prime-factor sieve.
"""

from __future__ import annotations

import cmath
import math
import threading
from dataclasses import dataclass, field
from typing import Callable

import numba
import numpy as np

from .core import Alphabet, Sequence, SequenceError, _Growing

ZERO = -1


@numba.njit(cache=True)
def _spf_sieve(L):
    spf = np.zeros(L + 1, np.int64)
    for i in range(2, L + 1):
        if spf[i] == 0:
            spf[i] = i
            if i * i <= L:
                for j in range(i * i, L + 1, i):
                    if spf[j] == 0:
                        spf[j] = i
    return spf


_SPF: _Growing | None = None
_SPF_LOCK = threading.Lock()


def spf_table(L: int) -> np.ndarray:
    """Smallest prime factor of every ``n <= L`` (entries 0 and 1 are 0)."""
    global _SPF
    with _SPF_LOCK:
        if _SPF is None:
            _SPF = _Growing(lambda size: _spf_sieve(size - 1), initial=max(1 << 16, L + 1))
    return _SPF.get(L + 1)


def primes_upto(P: int) -> np.ndarray:
    if P < 2:
        return np.zeros(0, dtype=np.int64)
    spf = spf_table(P)[: P + 1]
    n = np.arange(P + 1)
    return n[(spf == n) & (n >= 2)]


@numba.njit(cache=True)
def _assemble(spf, ppv, order, L):
    a = np.empty(L + 1, np.int64)
    a[0] = -1
    if L >= 1:
        a[1] = 0
    for n in range(2, L + 1):
        p = spf[n]
        q = n
        while q % p == 0:
            q //= p
        loc = ppv[n // q]
        rest = a[q]
        if loc < 0 or rest < 0:
            a[n] = -1
        else:
            a[n] = (loc + rest) % order
    return a


def _prime_powers(L: int):
    ps = primes_upto(L)
    P, E, V = [], [], []
    for p in ps.tolist():
        e, v = 1, p
        while v <= L:
            P.append(p)
            E.append(e)
            V.append(v)
            e += 1
            v *= p
    return np.array(P, dtype=np.int64), np.array(E, dtype=np.int64), np.array(V, dtype=np.int64)


def root_symbols(order: int) -> tuple:
    if order == 1:
        return (0, 1)
    if order == 2:
        return (0, 1, -1)
    if order == 4:
        return (0, 1, 1j, -1, -1j)
    return (0,) + tuple(cmath.rect(1.0, 2 * math.pi * e / order) for e in range(order))


@dataclass
class MultiplicativeSpec:
    """Values on prime powers; ``local(p, e)`` returns exponent arrays (``-1`` = zero).

    ``complete`` marks completely multiplicative specs, for which ``local`` is
    only ever consulted through ``e * local(p, 1)``.
    """

    order: int
    local: Callable[[np.ndarray, np.ndarray], np.ndarray]
    name: str
    params: dict = field(default_factory=dict)
    complete: bool = False

    def __post_init__(self):
        if self.order < 1:
            raise SequenceError("order must be positive")
        self._lock = threading.Lock()
        self._cache = None

    def local_values(self, p: np.ndarray, e: np.ndarray) -> np.ndarray:
        p = np.asarray(p, dtype=np.int64)
        e = np.asarray(e, dtype=np.int64)
        if self.complete:
            base = np.asarray(self.local(p, np.ones_like(e)), dtype=np.int64)
            return np.where(base < 0, ZERO, (base * e) % self.order)
        return np.asarray(self.local(p, e), dtype=np.int64)

    def _build(self, size: int) -> np.ndarray:
        L = size - 1
        spf = spf_table(L)
        P, E, V = _prime_powers(L)
        ppv = np.full(L + 1, ZERO, dtype=np.int64)
        if V.size:
            vals = self.local_values(P, E)
            if vals.size and (vals.max() >= self.order or vals.min() < ZERO):
                raise SequenceError("prime-power value outside {0} and the roots of unity")
            ppv[V] = vals
        return _assemble(spf, ppv, self.order, L)

    def exponents(self, idx: np.ndarray) -> np.ndarray:
        idx = np.asarray(idx, dtype=np.int64)
        if idx.size == 0:
            return np.zeros(0, dtype=np.int64)
        need = int(idx.max()) + 1
        with self._lock:
            if self._cache is None:
                self._cache = _Growing(self._build, initial=max(1 << 12, need))
        return self._cache.get(need)[idx]

    def prime_values(self, primes: np.ndarray) -> np.ndarray:
        """Complex values at the given primes."""
        e = self.local_values(primes, np.ones(len(primes), dtype=np.int64))
        ang = np.exp(2j * np.pi * np.where(e < 0, 0, e) / self.order)
        return np.where(e < 0, 0.0, ang)


def multiplicative_sequence(spec: MultiplicativeSpec) -> Sequence:
    syms = root_symbols(spec.order)

    def fn(idx):
        return spec.exponents(idx) + 1

    s = Sequence(Alphabet(syms), fn, spec.name, dict(spec.params))
    s.mult_spec = spec
    return s


# built-in specs -----------------------------------------------------------------


def one_spec() -> MultiplicativeSpec:
    return MultiplicativeSpec(1, lambda p, e: np.zeros(p.shape, np.int64), "one", complete=True)


def mobius_spec() -> MultiplicativeSpec:
    return MultiplicativeSpec(2, lambda p, e: np.where(e == 1, 1, ZERO), "mobius")


def liouville_spec() -> MultiplicativeSpec:
    return MultiplicativeSpec(2, lambda p, e: np.ones(p.shape, np.int64), "liouville", complete=True)


def _primitive_root(p: int) -> int:
    phi = p - 1
    facs = _prime_factors(phi)
    for g in range(2, p):
        if all(pow(g, phi // f, p) != 1 for f in facs):
            return g
    return 1


def _prime_factors(n: int) -> list[int]:
    out, d = [], 2
    while d * d <= n:
        if n % d == 0:
            out.append(d)
            while n % d == 0:
                n //= d
        d += 1
    if n > 1:
        out.append(n)
    return out


def character_components(q: int) -> list[tuple[int, int, int]]:
    """Cyclic components ``(modulus p^k, generator, order)`` of ``(Z/q)^*``."""
    comps = []
    n = q
    for p in _prime_factors(q):
        k = 0
        while n % p == 0:
            n //= p
            k += 1
        pk = p**k
        if p == 2:
            if k == 2:
                comps.append((pk, pk - 1, 2))
            elif k >= 3:
                comps.append((pk, pk - 1, 2))
                comps.append((pk, 5, 2 ** (k - 2)))
        else:
            g = _primitive_root(p)
            if k > 1 and pow(g, p - 1, p * p) == 1:
                g += p
            comps.append((pk, g, pk // p * (p - 1)))
    return comps


def character_count(q: int) -> int:
    return math.prod(c[2] for c in character_components(q)) if q > 1 else 1


def character_table(q: int, index: int) -> tuple[int, np.ndarray]:
    """``(order, exps)`` with ``exps[x]`` the exponent of ``chi(x)`` for ``x mod q``."""
    if q < 1:
        raise SequenceError("modulus must be positive")
    comps = character_components(q)
    total = math.prod(c[2] for c in comps) if comps else 1
    if not 0 <= index < total:
        raise SequenceError(f"character index {index} out of range for modulus {q} ({total} characters)")
    digits, rest = [], index
    for _, _, o in comps:
        digits.append(rest % o)
        rest //= o
    L = math.lcm(*[o for _, _, o in comps]) if comps else 1
    lifts = []
    for pk, g, _ in comps:
        # generator of this component, trivial on the others (CRT)
        other = q // pk
        lifts.append((g * other * pow(other, -1, pk) + (1 - (other * pow(other, -1, pk)) % q)) % q
                     if other > 1 else g % q)
    exps = np.full(q, ZERO, dtype=np.int64)
    if q == 1:
        exps[0] = 0
        return 1, exps
    state = [(1, 0)]
    for (pk, g, o), G, dgt in zip(comps, lifts, digits):
        nxt = []
        for x, e in state:
            y = x
            for t in range(o):
                nxt.append((y, (e + t * dgt * (L // o)) % L))
                y = (y * G) % q
        state = nxt
    for x, e in state:
        exps[x] = e
    return L, exps


def character_spec(q: int, index: int) -> MultiplicativeSpec:
    order, table = character_table(q, index)
    return MultiplicativeSpec(order, lambda p, e: table[p % q], f"chi_{q}_{index}",
                              {"q": q, "index": index}, complete=True)


def mobius() -> Sequence:
    return multiplicative_sequence(mobius_spec())


def liouville() -> Sequence:
    return multiplicative_sequence(liouville_spec())


def dirichlet_character(q: int, index: int) -> Sequence:
    return multiplicative_sequence(character_spec(q, index))


def _eventual(values: list, period: int, i: np.ndarray) -> np.ndarray:
    arr = np.asarray(values)
    L = len(values)
    pre = L - period
    j = np.where(i < L, i, pre + (i - pre) % period)
    return arr[j]


def klm_form(p: int, b: list, c: list, c_period: int = 1) -> Sequence:
    """``a_{p^i n} = c_i b_n`` for ``p`` not dividing ``n``, and ``a_0 = 0``.

    ``b`` is periodic with period ``len(b)``; ``c`` is eventually periodic, its
    last ``c_period`` entries repeating.
    """
    if p < 2 or _prime_factors(p) != [p]:
        raise SequenceError(f"{p} is not prime")
    if not b or not c or not 1 <= c_period <= len(c):
        raise SequenceError("b and c must be non-empty with a valid period")
    vals = sorted({0} | {x * y for x in b for y in c}, key=lambda z: (abs(z), repr(z)))
    alph = Alphabet(tuple(vals))
    lut = {v: alph.code(v) for v in vals}
    prod = np.array([[lut[x * y] for x in b] for y in c], dtype=np.int64)
    bp = len(b)

    def fn(idx):
        out = np.full(idx.shape, lut[0], dtype=np.int64)
        pos = idx > 0
        m = idx[pos].copy()
        i = np.zeros(m.shape, dtype=np.int64)
        while True:
            d = m % p == 0
            if not d.any():
                break
            m[d] //= p
            i[d] += 1
        ci = _eventual(list(range(len(c))), c_period, i)
        out[pos] = prod[ci, m % bp]
        return out

    return Sequence(alph, fn, "klm_form", {"p": p, "b": list(b), "c": list(c), "c_period": c_period})


def p_local(spec: MultiplicativeSpec, p: int) -> MultiplicativeSpec:
    """``a^(p)``: agrees with ``a`` on powers of ``p`` and equals 1 on other prime powers."""

    def local(r, e):
        base = spec.local_values(r, e)
        return np.where(r == p, base, 0)

    return MultiplicativeSpec(spec.order, local, f"{spec.name}^({p})", {"base": spec.name, "p": p})


def p_local_abs2(spec: MultiplicativeSpec, p: int) -> MultiplicativeSpec:
    """``c^(p)_n = |a^(p)_n|^2``, an indicator-valued multiplicative spec."""

    def local(r, e):
        base = spec.local_values(r, e)
        return np.where((r == p) & (base < 0), ZERO, 0)

    return MultiplicativeSpec(1, local, f"|{spec.name}^({p})|^2", {"base": spec.name, "p": p})
