"""Mechanical (Sturmian) words and bracket words with exact parameters."""

from __future__ import annotations

from fractions import Fraction

import numpy as np

from ..reals import Real
from .core import Alphabet, Sequence, SequenceError

BINARY = Alphabet((0, 1))


def _mechanical(theta: Real, rho: Real, mode: str, idx: np.ndarray) -> np.ndarray:
    if mode == "floor":
        hi = theta.floor_affine(idx + 1, rho)
        lo = theta.floor_affine(idx, rho)
    else:
        # ceil(x) = -floor(-x)
        hi = -(-theta).floor_affine(idx + 1, -rho)
        lo = -(-theta).floor_affine(idx, -rho)
    return np.asarray(hi - lo, dtype=np.int64)


def sturmian(theta, rho=0, mode: str = "floor") -> Sequence:
    """``a_n = [theta(n+1)+rho] - [theta n + rho]`` with ``[.]`` floor or ceiling."""
    th, rh = Real.parse(theta), Real.parse(rho)
    if _cmp(th, 0) <= 0 or _cmp(th, 1) >= 0:
        raise SequenceError(f"slope must lie in (0, 1), got {th}")
    if _cmp(rh, 0) < 0 or _cmp(rh, 1) >= 0:
        raise SequenceError(f"intercept must lie in [0, 1), got {rh}")
    if mode not in ("floor", "ceil"):
        raise SequenceError(f"mode must be floor or ceil, got {mode!r}")
    _same_field(th, rh)
    return Sequence(BINARY, lambda idx: _mechanical(th, rh, mode, idx), "sturmian",
                    {"theta": str(th), "rho": str(rh), "mode": mode})


def _same_field(x: Real, y: Real) -> None:
    try:
        x._compatible(y)
    except ValueError as exc:
        raise SequenceError(str(exc)) from None


def _cmp(x: Real, c) -> int:
    """Exact sign of ``x - c`` for a rational ``c``."""
    return Real(x.a - Fraction(c), x.b, x.d).sign()


def patched_sturmian(theta, rho_list, block_lengths, mode: str = "floor") -> Sequence:
    """Sturmian blocks of a common slope with intercept ``rho_j`` on block ``j``.

    Block ``j`` covers ``[B_j, B_j + L_j)`` where ``B_j`` is the sum of earlier
    lengths; the last block extends indefinitely. Within a block the index fed
    to the mechanical word is the global index ``n``.
    """
    rhos = [Real.parse(r) for r in rho_list]
    lengths = [int(L) for L in block_lengths]
    if not rhos:
        raise SequenceError("need at least one block")
    if len(lengths) != len(rhos):
        raise SequenceError("one block length per intercept is required")
    if any(L <= 0 for L in lengths):
        raise SequenceError("block lengths must be positive")
    if any(b <= a for a, b in zip(lengths, lengths[1:])):
        raise SequenceError("block lengths must be strictly increasing")
    parts = [sturmian(theta, r, mode) for r in rhos]
    starts = np.cumsum([0] + lengths[:-1]).astype(np.int64)

    def fn(idx):
        block = np.searchsorted(starts, idx, side="right") - 1
        out = np.empty(idx.shape, dtype=np.int64)
        for j, seq in enumerate(parts):
            m = block == j
            if m.any():
                out[m] = seq.codes(idx[m])
        return out

    s = Sequence(BINARY, fn, "patched_sturmian",
                 {"theta": str(Real.parse(theta)), "rho_list": [str(r) for r in rhos],
                  "block_lengths": lengths, "mode": mode})
    s.boundaries = [int(x) for x in starts[1:]]
    return s


def bracket_floor_mod(alpha, beta, m: int) -> Sequence:
    """``a_n = floor(alpha n + beta) mod m``."""
    if m < 2:
        raise SequenceError("modulus must be at least 2")
    al, be = Real.parse(alpha), Real.parse(beta)
    _same_field(al, be)

    def fn(idx):
        v = al.floor_affine(idx, be)
        return np.asarray(v % m, dtype=np.int64)

    return Sequence(Alphabet.range(m), fn, "bracket_floor_mod",
                    {"alpha": str(al), "beta": str(be), "m": m})
