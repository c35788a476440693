"""Exact real parameters: rationals and quadratic irrationals.

Slopes and intercepts of mechanical words are sensitive at floor boundaries,
so they are never stored as floats. A parameter is ``a + b*sqrt(d)`` with
rational ``a, b`` and square-free ``d`` (``d == 0`` for a plain rational).
Decimal strings are parsed as the exact rational they denote.

Accepted textual forms::

    "0.70710678"   "1/3"   "-2"   "1e-3"
    "sqrt(2)"   "sqrt(2)/2"   "(sqrt(5)-1)/2"   "(1+2*sqrt(5))/3"   "3*sqrt(7)"
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

_INT64_SAFE = 2**62

def _make(a, b, d) -> "Real":
    if b == 0 or d == 0:
        return Real(Fraction(a))
    return Real(Fraction(a), Fraction(b), d)


_TOKEN = re.compile(r"\s*(?:(\d+(?:\.\d*)?(?:[eE][+-]?\d+)?|\.\d+(?:[eE][+-]?\d+)?)|(sqrt)|(.))")


class _Parser:
    """Recursive descent over + - * / ( ) sqrt(integer) and decimal literals."""

    def __init__(self, text: str):
        self.toks = []
        for m in _TOKEN.finditer(text):
            num, fn, op = m.groups()
            if num:
                self.toks.append(("num", num))
            elif fn:
                self.toks.append(("fn", fn))
            elif op and not op.isspace():
                self.toks.append(("op", op))
        self.i = 0

    def peek(self):
        return self.toks[self.i] if self.i < len(self.toks) else (None, None)

    def take(self, want=None):
        tok = self.peek()
        if tok[0] is None or (want is not None and tok[1] != want):
            raise ValueError(f"expected {want or 'token'} at token {self.i}")
        self.i += 1
        return tok

    def parse(self) -> "Real":
        if not self.toks:
            raise ValueError("empty expression")
        v = self.expr()
        if self.i != len(self.toks):
            raise ValueError(f"unexpected {self.peek()[1]!r} at token {self.i}")
        return v

    def expr(self):
        v = self.term()
        while self.peek()[1] in ("+", "-"):
            op = self.take()[1]
            w = self.term()
            v = v + w if op == "+" else v - w
        return v

    def term(self):
        v = self.unary()
        while self.peek()[1] in ("*", "/"):
            op = self.take()[1]
            w = self.unary()
            v = v * w if op == "*" else v / w
        return v

    def unary(self):
        if self.peek()[1] == "-":
            self.take()
            return -self.unary()
        if self.peek()[1] == "+":
            self.take()
        return self.atom()

    def atom(self):
        kind, val = self.peek()
        if kind == "num":
            self.take()
            return Real(Fraction(val))
        if kind == "fn":
            self.take()
            self.take("(")
            inner = self.expr()
            self.take(")")
            if not inner.is_rational or inner.a.denominator != 1 or inner.a < 0:
                raise ValueError("sqrt takes a non-negative integer")
            s, f = _squarefree_split(int(inner.a))
            return Real(Fraction(s)) if f == 1 else Real(Fraction(0), Fraction(s), f)
        if val == "(":
            self.take()
            v = self.expr()
            self.take(")")
            return v
        raise ValueError(f"unexpected {val!r} at token {self.i}")


def _squarefree_split(d: int) -> tuple[int, int]:
    """Return ``(s, f)`` with ``d = s**2 * f`` and ``f`` square-free."""
    if d == 0:
        return 0, 1
    s, f = 1, d
    p = 2
    while p * p <= f:
        while f % (p * p) == 0:
            f //= p * p
            s *= p
        p += 1
    return s, f


@dataclass(frozen=True)
class Real:
    a: Fraction
    b: Fraction = Fraction(0)
    d: int = 0
    text: str = field(default="", compare=False)

    @classmethod
    def parse(cls, value: "str | int | float | Fraction | Real") -> "Real":
        if isinstance(value, Real):
            return value
        if isinstance(value, bool):
            raise TypeError("boolean is not a real parameter")
        if isinstance(value, (int, Fraction)):
            return cls(Fraction(value), text=str(value))
        if isinstance(value, float):
            # floats are exact binary rationals; keep repr for round-trip
            return cls(Fraction(value), text=repr(value))
        if not isinstance(value, str):
            raise TypeError(f"cannot interpret {value!r} as a real parameter")
        text = value.strip()
        try:
            val = _Parser(text).parse()
        except (ValueError, ZeroDivisionError, IndexError) as exc:
            raise ValueError(f"malformed real parameter {value!r}: {exc}") from exc
        return cls(val.a, val.b, val.d, text=text)

    def __str__(self) -> str:
        if self.text:
            return self.text
        if self.d == 0:
            return str(self.a)
        return f"({self.a})+({self.b})*sqrt({self.d})"

    @property
    def is_rational(self) -> bool:
        return self.d == 0 or self.b == 0

    def __float__(self) -> float:
        return float(self.a) + float(self.b) * math.sqrt(self.d)

    def __neg__(self) -> "Real":
        return Real(-self.a, -self.b, self.d)

    def _lift(self, other) -> "Real":
        return other if isinstance(other, Real) else Real(Fraction(other))

    def __add__(self, other) -> "Real":
        o = self._lift(other)
        d = self._compatible(o)
        return _make(self.a + o.a, self.b + o.b, d)

    __radd__ = __add__

    def __sub__(self, other) -> "Real":
        return self + (-self._lift(other))

    def __rsub__(self, other) -> "Real":
        return self._lift(other) - self

    def __mul__(self, other) -> "Real":
        o = self._lift(other)
        d = self._compatible(o)
        return _make(self.a * o.a + self.b * o.b * d, self.a * o.b + self.b * o.a, d)

    __rmul__ = __mul__

    def __truediv__(self, other) -> "Real":
        o = self._lift(other)
        if o.is_rational:
            if o.a == 0:
                raise ZeroDivisionError("division by zero")
            return _make(self.a / o.a, self.b / o.a, self.d)
        # multiply by the conjugate
        den = o.a * o.a - o.b * o.b * o.d
        num = self * Real(o.a, -o.b, o.d)
        return _make(num.a / den, num.b / den, num.d)

    def _compatible(self, other: "Real") -> int:
        if self.is_rational:
            return 0 if other.is_rational else other.d
        if other.is_rational or other.d == self.d:
            return self.d
        raise ValueError(f"incompatible quadratic fields sqrt({self.d}) and sqrt({other.d})")

    def sign(self) -> int:
        """Exact sign of the number."""
        if self.is_rational:
            return (self.a > 0) - (self.a < 0)
        # a + b sqrt(d): compare a^2 with b^2 d where signs differ
        sa, sb = (self.a > 0) - (self.a < 0), (self.b > 0) - (self.b < 0)
        if sa == 0 or sa == sb:
            return sb
        return sa if self.a * self.a > self.b * self.b * self.d else sb

    def floor_int(self, m: int = 1, offset: "Real | None" = None) -> int:
        """``floor(self * m + offset)`` for a Python integer ``m``."""
        return int(self.floor_affine(np.array([m], dtype=object), offset)[0])

    def floor_affine(self, n: np.ndarray, offset: "Real | None" = None) -> np.ndarray:
        """Elementwise ``floor(self * n + offset)`` for an integer array ``n``."""
        off = offset if offset is not None else Real(Fraction(0))
        d = self._compatible(off)
        ob = off.b if not off.is_rational else Fraction(0)
        sb = self.b if not self.is_rational else Fraction(0)
        den = math.lcm(self.a.denominator, off.a.denominator, sb.denominator, ob.denominator)
        pa, qa = int(self.a * den), int(off.a * den)
        pb, qb = int(sb * den), int(ob * den)
        n = np.asarray(n)
        nmax = int(np.max(np.abs(n))) if n.size else 0
        bound = (abs(pa) + abs(qa) + abs(pb) + abs(qb)) * (nmax + 1)
        small = bound * bound * max(d, 1) < _INT64_SAFE and n.dtype != object
        arr = n.astype(np.int64) if small else n.astype(object)
        A = pa * arr + qa
        if d == 0 or (pb == 0 and qb == 0):
            return A // den
        B = pb * arr + qb
        return (A + _floor_sqrt_times(B, d, small)) // den


def _floor_sqrt_times(B: np.ndarray, d: int, small: bool) -> np.ndarray:
    """Elementwise ``floor(B * sqrt(d))`` for square-free ``d > 1``."""
    if small:
        absb = np.abs(B)
        sq = absb * absb * d
        r = np.floor(np.sqrt(sq.astype(np.float64))).astype(np.int64)
        for _ in range(2):
            r = np.where(r * r > sq, r - 1, r)
            r = np.where((r + 1) * (r + 1) <= sq, r + 1, r)
        # B*sqrt(d) is irrational unless B == 0
        return np.where(B >= 0, r, -r - 1)
    out = np.empty(B.shape, dtype=object)
    flat_in, flat_out = B.ravel(), out.ravel()
    for i, b in enumerate(flat_in):
        b = int(b)
        r = math.isqrt(b * b * d)
        flat_out[i] = r if b >= 0 else -r - 1
    return out


def floor_mul(theta: Real, m: int) -> int:
    """``floor(theta * m)`` for a (possibly huge) Python integer ``m``."""
    if theta.is_rational:
        return (theta.a.numerator * m) // theta.a.denominator
    den = math.lcm(theta.a.denominator, theta.b.denominator)
    A = int(theta.a * den) * m
    B = int(theta.b * den) * m
    r = math.isqrt(B * B * theta.d)
    fb = r if B >= 0 else -r - 1
    return (A + fb) // den
