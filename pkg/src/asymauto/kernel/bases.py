"""Which bases a sequence can be automatic in, from multiplicative relations among base exponents."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .. import linalg


def factorize(n: int) -> dict[int, int]:
    out, d = {}, 2
    while d * d <= n:
        while n % d == 0:
            out[d] = out.get(d, 0) + 1
            n //= d
        d += 1
    if n > 1:
        out[n] = out.get(n, 0) + 1
    return out


def exponent_vector(n: int, primes: list[int]) -> list[int]:
    f = factorize(n)
    return [f.get(p, 0) for p in primes]


@dataclass
class BaseSpace:
    bases: tuple
    primes: list  # prime support of the generating bases
    basis: list  # rref rows over the rationals

    @property
    def dimension(self) -> int:
        return len(self.basis)

    def member(self, k: int) -> bool:
        """Whether ``(nu_p(k))_p`` lies in the span ``V`` (lattice points of ``V`` are admissible bases)."""
        if k < 1:
            raise ValueError("k must be positive")
        extra = sorted(set(factorize(k)) - set(self.primes))
        if extra:
            return False
        v = exponent_vector(k, self.primes)
        return linalg.in_span(self.basis, v)

    def to_dict(self) -> dict:
        return {"bases": list(self.bases), "primes": self.primes,
                "basis": [[str(x) for x in row] for row in self.basis]}


def base_closure(bases) -> BaseSpace:
    bases = tuple(int(b) for b in bases)
    if not bases or any(b < 2 for b in bases):
        raise ValueError("bases must be integers >= 2")
    primes = sorted({p for b in bases for p in factorize(b)})
    rows = [exponent_vector(b, primes) for b in bases]
    R, _ = linalg.rref(rows)
    return BaseSpace(bases, primes, [[Fraction(x) for x in r] for r in R])
