"""Exact linear algebra over the rationals and prime fields.

Matrices are lists of rows. Rational elimination keeps each row as integers
with a content-free (gcd 1) normalization, which avoids Fraction overhead on
the integer inputs that dominate here.
"""

from __future__ import annotations

import math
from fractions import Fraction
from typing import Iterable, Sequence


def _to_fraction_rows(M) -> list[list[Fraction]]:
    return [[Fraction(x) for x in row] for row in M]


def _integer_rows(M) -> list[list[int]]:
    """Scale each row by the lcm of its denominators."""
    out = []
    for row in M:
        fr = [Fraction(x) for x in row]
        den = math.lcm(*[f.denominator for f in fr]) if fr else 1
        out.append([int(f * den) for f in fr])
    return out


def _primitive(row: list[int]) -> list[int]:
    g = 0
    for x in row:
        g = math.gcd(g, x)
        if g == 1:
            return row
    return [x // g for x in row] if g > 1 else row


def echelon(M) -> tuple[list[list[int]], list[int]]:
    """Integer row echelon form (rows primitive) and pivot columns."""
    rows = [_primitive(r) for r in _integer_rows(M) if any(r)]
    if not rows:
        return [], []
    ncols = len(rows[0])
    pivots: list[int] = []
    done: list[list[int]] = []
    col = 0
    while rows and col < ncols:
        piv = None
        for idx, r in enumerate(rows):
            if r[col] != 0 and (piv is None or abs(r[col]) < abs(rows[piv][col])):
                piv = idx
        if piv is None:
            col += 1
            continue
        p = rows.pop(piv)
        nxt = []
        for r in rows:
            if r[col] != 0:
                a, b = p[col], r[col]
                g = math.gcd(a, b)
                r = [(a // g) * x - (b // g) * y for x, y in zip(r, p)]
                if not any(r):
                    continue
                r = _primitive(r)
            nxt.append(r)
        done.append(p)
        pivots.append(col)
        rows = nxt
        col += 1
    return done, pivots


def rank(M) -> int:
    return len(echelon(M)[0])


def rref(M) -> tuple[list[list[Fraction]], list[int]]:
    """Reduced row echelon form over the rationals."""
    E, piv = echelon(M)
    R = [[Fraction(x, row[c]) for x in row] for row, c in zip(E, piv)]
    for i in range(len(R) - 1, -1, -1):
        c = piv[i]
        for j in range(i):
            f = R[j][c]
            if f:
                R[j] = [x - f * y for x, y in zip(R[j], R[i])]
    return R, piv


def nullspace(M, ncols: int | None = None) -> list[list[Fraction]]:
    """Basis of ``{x : M x = 0}`` over the rationals."""
    M = list(M)
    if ncols is None:
        if not M:
            raise ValueError("ncols required for an empty matrix")
        ncols = len(M[0])
    R, piv = rref(M) if M else ([], [])
    free = [c for c in range(ncols) if c not in set(piv)]
    basis = []
    for f in free:
        v = [Fraction(0)] * ncols
        v[f] = Fraction(1)
        for row, c in zip(R, piv):
            v[c] = -row[f]
        basis.append(v)
    return basis


def in_span(basis_rows, v) -> bool:
    return rank(list(basis_rows) + [list(v)]) == rank(basis_rows) if basis_rows else not any(v)


def matmul(A, B):
    return [[sum(a * b for a, b in zip(row, col)) for col in zip(*B)] for row in A]


def det_mod_p(M, p: int) -> int:
    A = [[int(Fraction(x).numerator * pow(Fraction(x).denominator, -1, p)) % p for x in row] for row in M]
    n = len(A)
    det = 1
    for c in range(n):
        piv = next((r for r in range(c, n) if A[r][c] % p), None)
        if piv is None:
            return 0
        if piv != c:
            A[c], A[piv] = A[piv], A[c]
            det = -det
        det = det * A[c][c] % p
        inv = pow(A[c][c], -1, p)
        for r in range(c + 1, n):
            if A[r][c]:
                f = A[r][c] * inv % p
                A[r] = [(x - f * y) % p for x, y in zip(A[r], A[c])]
    return det % p
