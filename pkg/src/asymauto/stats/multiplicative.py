"""Pretentious distance between multiplicative sequences."""

from __future__ import annotations

import math

import numpy as np

from ..seqcore.multiplicative import MultiplicativeSpec, p_local, p_local_abs2, primes_upto  # noqa: F401


def _prime_values(a, primes: np.ndarray) -> np.ndarray:
    if isinstance(a, MultiplicativeSpec):
        v = a.prime_values(primes)
    else:
        v = np.array([complex(a(int(p))) for p in primes])
    if v.size and np.max(np.abs(v)) > 1 + 1e-12:
        raise ValueError("values on primes must be 1-bounded")
    return v


def mult_distance_sq(a, b, P: int) -> float:
    """``sum_{p <= P} (1 - Re(a_p conj(b_p))) / p``."""
    ps = primes_upto(P)
    va, vb = _prime_values(a, ps), _prime_values(b, ps)
    terms = (1.0 - np.real(va * np.conj(vb))) / ps
    return math.fsum(terms.tolist())


def mult_distance(a, b, P: int) -> float:
    return math.sqrt(max(0.0, mult_distance_sq(a, b, P)))
