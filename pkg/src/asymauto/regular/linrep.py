"""Linear representations of k-regular sequences and the operators Lambda_u."""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable

import numpy as np

from .. import linalg
from ..seqcore.core import INDEX_MAX, Sequence

Q_FIELD = "Q"


class NumericSequence:
    """Integer- or rational-valued sequence evaluated on index arrays."""

    def __init__(self, fn: Callable[[np.ndarray], np.ndarray], tag: str, params: dict | None = None):
        self._fn = fn
        self.tag = tag
        self.params = dict(params or {})

    def values(self, idx) -> np.ndarray:
        return np.asarray(self._fn(np.asarray(idx, dtype=np.int64).ravel()))

    def eval(self, n: int):
        v = self.values(np.array([n]))[0]
        return int(v) if isinstance(v, (int, np.integer)) else v

    def prefix(self, N: int) -> list:
        return [x if isinstance(x, Fraction) else int(x) for x in self.values(np.arange(N)).tolist()]


def as_numeric(a) -> NumericSequence:
    if isinstance(a, NumericSequence):
        return a
    if isinstance(a, Sequence):
        if not a.alphabet.is_numeric():
            raise ValueError(f"{a.tag} is not integer valued")
        return NumericSequence(a.values, a.tag)
    if isinstance(a, LinearRepresentation):
        return NumericSequence(a.eval_many, "linrep")
    if callable(a):
        return NumericSequence(lambda idx: np.array([a(int(n)) for n in idx], dtype=object), "callable")
    raise TypeError(f"cannot read {a!r} as a numeric sequence")


def _F(x) -> Fraction:
    return x if isinstance(x, Fraction) else Fraction(x)


@dataclass(frozen=True)
class LinearRepresentation:
    """``a_n = lam . M_{d_1} ... M_{d_m} . gam`` with digits most significant first."""

    lam: tuple
    mats: tuple  # mats[d] is a D x D tuple of rows
    gam: tuple
    field: object = Q_FIELD  # "Q" or a prime p

    def __post_init__(self):
        D = len(self.lam)
        if D == 0 or len(self.gam) != D:
            raise ValueError("row and column vectors must share the dimension")
        if len(self.mats) < 2:
            raise ValueError("need one matrix per digit (base >= 2)")
        for M in self.mats:
            if len(M) != D or any(len(r) != D for r in M):
                raise ValueError("digit matrices must be D x D")
        conv = self._conv
        object.__setattr__(self, "lam", tuple(conv(x) for x in self.lam))
        object.__setattr__(self, "gam", tuple(conv(x) for x in self.gam))
        object.__setattr__(self, "mats", tuple(tuple(tuple(conv(x) for x in r) for r in M) for M in self.mats))

    def _conv(self, x):
        if self.field == Q_FIELD:
            return _F(x)
        p = int(self.field)
        f = _F(x)
        return f.numerator * pow(f.denominator, -1, p) % p

    @property
    def k(self) -> int:
        return len(self.mats)

    @property
    def dimension(self) -> int:
        return len(self.lam)

    def is_integral(self) -> bool:
        if self.field != Q_FIELD:
            return True
        ents = list(self.lam) + list(self.gam) + [x for M in self.mats for r in M for x in r]
        return all(x.denominator == 1 for x in ents)

    def _reduce(self, x):
        return x if self.field == Q_FIELD else x % int(self.field)

    def eval(self, n: int):
        """Exact value at ``n`` (``lam . gam`` for ``n = 0``)."""
        if n < 0:
            raise ValueError("n must be non-negative")
        row = list(self.lam)
        digits = []
        while n:
            n, d = divmod(n, self.k)
            digits.append(d)
        for d in reversed(digits):
            M = self.mats[d]
            row = [self._reduce(sum(row[i] * M[i][j] for i in range(self.dimension))) for j in range(self.dimension)]
        v = self._reduce(sum(r * g for r, g in zip(row, self.gam)))
        if self.field == Q_FIELD and v.denominator == 1:
            return int(v)
        return v

    def eval_many(self, idx) -> np.ndarray:
        """Vectorized evaluation, applying digits from the least significant end to the column vector."""
        idx = np.asarray(idx, dtype=np.int64).ravel()
        D, k = self.dimension, self.k
        if idx.size == 0:
            return np.zeros(0, dtype=np.int64)
        top = int(idx.max())
        L = max(1, math.ceil(math.log(top + 1, k)) + 1) if top > 0 else 1
        if self.field == Q_FIELD and self.is_integral():
            bound = max([1] + [abs(int(x)) for M in self.mats for r in M for x in r])
            gb = max([1] + [abs(int(x)) for x in self.gam])
            lb = max([1] + [abs(int(x)) for x in self.lam])
            small = math.log2(D * bound) * L + math.log2(gb * lb * D) < 62
            dtype = np.int64 if small else object
            conv = int
        elif self.field == Q_FIELD:
            dtype, conv = object, (lambda x: x)
        else:
            dtype, conv = np.int64, int
        Ms = [np.array([[conv(x) for x in r] for r in M], dtype=dtype) for M in self.mats]
        col = np.empty((D, idx.size), dtype=dtype)
        for i in range(D):
            col[i, :] = conv(self.gam[i])
        rest = idx.copy()
        active = rest > 0
        while active.any():
            d = rest % k
            new = np.zeros_like(col)
            for digit in range(k):
                sel = active & (d == digit)
                if not sel.any():
                    continue
                new[:, sel] = Ms[digit].dot(col[:, sel]) if dtype != object else _objdot(Ms[digit], col[:, sel])
            new[:, ~active] = col[:, ~active]
            if self.field != Q_FIELD:
                new %= int(self.field)
            col = new
            rest = rest // k
            active = rest > 0
        lam = np.array([conv(x) for x in self.lam], dtype=dtype)
        out = lam.dot(col) if dtype != object else _objdot(lam[None, :], col)[0]
        if self.field != Q_FIELD:
            out = out % int(self.field)
        return out

    def mod(self, p: int) -> "LinearRepresentation":
        return LinearRepresentation(self.lam, self.mats, self.gam, p)

    def to_dict(self) -> dict:
        s = str
        return {"dimension": self.dimension, "k": self.k, "field": str(self.field),
                "lambda": [s(x) for x in self.lam],
                "matrices": [[[s(x) for x in r] for r in M] for M in self.mats],
                "gamma": [s(x) for x in self.gam]}

    @classmethod
    def from_dict(cls, d: dict) -> "LinearRepresentation":
        fld = d.get("field", Q_FIELD)
        fld = Q_FIELD if fld == Q_FIELD else int(fld)
        return cls(tuple(Fraction(x) for x in d["lambda"]),
                   tuple(tuple(tuple(Fraction(x) for x in r) for r in M) for M in d["matrices"]),
                   tuple(Fraction(x) for x in d["gamma"]), fld)


def _objdot(A: np.ndarray, B: np.ndarray) -> np.ndarray:
    out = np.empty((A.shape[0], B.shape[1]), dtype=object)
    for i in range(A.shape[0]):
        acc = None
        for j in range(A.shape[1]):
            term = A[i, j] * B[j]
            acc = term if acc is None else acc + term
        out[i] = acc
    return out


def linrep_eval(rep: LinearRepresentation, n: int):
    return rep.eval(n)


def _word_digits(u, k: int) -> list[int]:
    ds = [int(ch) for ch in u] if isinstance(u, str) else [int(x) for x in u]
    if any(not 0 <= d < k for d in ds):
        raise ValueError(f"digit out of range for base {k}")
    return ds


def lambda_op(u, a, k: int = 2):
    """``Lambda_u(a)_n = a_{k^|u| n + [u]_k}``; composition obeys ``Lambda_{uv} = Lambda_u o Lambda_v``.

    On a representation, the column vector becomes ``M_{u_1} ... M_{u_L} gam``;
    this needs ``lam M_0 = lam`` so that leading zeros of ``n`` are harmless.
    """
    if isinstance(a, LinearRepresentation):
        ds = _word_digits(u, a.k)
        lamM0 = [sum(a.lam[i] * a.mats[0][i][j] for i in range(a.dimension)) for j in range(a.dimension)]
        lamM0 = [a._reduce(x) for x in lamM0]
        if list(lamM0) != list(a.lam):
            raise ValueError("Lambda_u on a representation requires lam M_0 = lam")
        col = list(a.gam)
        for d in reversed(ds):
            M = a.mats[d]
            col = [a._reduce(sum(M[i][j] * col[j] for j in range(a.dimension))) for i in range(a.dimension)]
        return LinearRepresentation(a.lam, a.mats, tuple(col), a.field)
    ds = _word_digits(u, k)
    step = k ** len(ds)
    off = 0
    for d in ds:
        off = off * k + d
    if isinstance(a, Sequence):
        from ..kernel.clustering import KernelAddress, kernel_element

        return kernel_element(a, KernelAddress(len(ds), off, k))
    num = as_numeric(a)

    def fn(idx):
        if idx.size and int(idx.max()) > (INDEX_MAX - off) // step:
            raise OverflowError("index leaves the 64-bit range")
        return num.values(idx * step + off)

    return NumericSequence(fn, f"Lambda_{''.join(map(str, ds))}({num.tag})")


# built-in representations ----------------------------------------------------------


def digit_sum_rep(k: int = 2) -> LinearRepresentation:
    return LinearRepresentation((0, 1), tuple(((1, 0), (d, 1)) for d in range(k)), (1, 0))


def identity_rep(k: int = 2) -> LinearRepresentation:
    return LinearRepresentation((0, 1), tuple(((k, 0), (d, 1)) for d in range(k)), (1, 0))


def last_digit_rep(k: int = 2) -> LinearRepresentation:
    """``a_n = n mod k``; ``M_0`` is singular."""
    return LinearRepresentation((0, 1), tuple(((0, 0), (d, 1)) for d in range(k)), (1, 0))


def square_rep(k: int = 2) -> LinearRepresentation:
    # row state (n^2, n, 1); appending digit d sends n to kn + d
    mats = tuple(((k * k, 0, 0), (2 * k * d, k, 0), (d * d, d, 1)) for d in range(k))
    return LinearRepresentation((0, 0, 1), mats, (1, 0, 0))


def invertibility_check(rep: LinearRepresentation) -> dict:
    if rep.field == Q_FIELD:
        raise ValueError("invertibility is checked over a prime field; call rep.mod(p) first")
    p = int(rep.field)
    dets = [linalg.det_mod_p(M, p) for M in rep.mats]
    flags = [d != 0 for d in dets]
    return {"p": p, "determinants": dets, "invertible": flags, "all_invertible": all(flags)}
