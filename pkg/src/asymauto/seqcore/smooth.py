"""3-smooth numbers 2^a 3^b, the parity-of-level sequence and its gamma schedule."""

from __future__ import annotations

import bisect
import heapq
import math
import threading
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .core import INDEX_MAX, Alphabet, Sequence, SequenceError


class ScheduleError(RuntimeError):
    pass


def smooth_enumeration(limit: int) -> list[tuple[int, int, int]]:
    """All ``(H, alpha, beta)`` with ``H = 2^alpha 3^beta <= limit``, increasing in ``H``."""
    if limit < 1:
        raise SequenceError("limit must be at least 1")
    out = []
    p3, b = 1, 0
    while p3 <= limit:
        h, a = p3, 0
        while h <= limit:
            out.append((h, a, b))
            h *= 2
            a += 1
        p3 *= 3
        b += 1
    out.sort()
    return out


def smooth_merge(limit: int) -> list[int]:
    """Heap-based generation of the same set, used as an independent check."""
    seen, heap, out = {1}, [1], []
    while heap:
        h = heapq.heappop(heap)
        if h > limit:
            break
        out.append(h)
        for f in (2, 3):
            if h * f not in seen:
                seen.add(h * f)
                heapq.heappush(heap, h * f)
    return out


def smooth_window(g: int) -> list[tuple[int, int, int]]:
    """Smooth numbers in ``[3^g, 3^(g+1))`` with exponents, sorted."""
    lo, hi = 3**g, 3 ** (g + 1)
    out = []
    for b in range(g + 1):
        x, a = 3**b, 0
        # smallest power of two lifting 3^b into the window
        shift = max(0, (lo // x).bit_length() - 1)
        x <<= shift
        a += shift
        while x < lo:
            x <<= 1
            a += 1
        while x < hi:
            out.append((x, a, b))
            x <<= 1
            a += 1
    out.sort()
    return out


def iter_smooth_below(N: int):
    """Yield ``(H, alpha, beta)`` for all smooth ``H < N`` in increasing order."""
    g = 0
    while 3**g < N:
        for t in smooth_window(g):
            if t[0] >= N:
                return
            yield t
        g += 1


# harmonic differences -------------------------------------------------------

_HT = 1 << 14
_HTABLE = np.concatenate([[0.0], np.cumsum(1.0 / np.arange(1, _HT + 1, dtype=np.float64))])


def _psi_tail(x: int) -> float:
    # H_x - ln x - Euler gamma, asymptotic series (error below 1e-27 for x >= 2^14)
    if x.bit_length() > 200:
        return 0.0
    xf = float(x)
    return 1.0 / (2 * xf) - 1.0 / (12 * xf * xf) + 1.0 / (120 * xf**4)


def harmonic_exact(a: int, b: int) -> Fraction:
    """``sum_{n=a}^{b-1} 1/(n+1)`` as an exact rational."""
    return sum((Fraction(1, n + 1) for n in range(a, b)), Fraction(0))


def harmonic_diff(a: int, b: int) -> float:
    """``sum_{n=a}^{b-1} 1/(n+1) = H_b - H_a`` in double precision.

    Exact table differences below ``2^14``; above, ``log(b/a)`` plus the
    asymptotic corrections of the digamma function.
    """
    if b <= a:
        return 0.0
    if b <= _HT:
        return float(_HTABLE[b] - _HTABLE[a])
    if a < _HT:
        return float(_HTABLE[_HT] - _HTABLE[a]) + harmonic_diff(_HT, b)
    return math.log1p((b - a) / a) + _psi_tail(b) - _psi_tail(a)


# schedules ------------------------------------------------------------------


@dataclass(frozen=True)
class SmoothSchedule:
    gamma: tuple

    def __post_init__(self):
        g = tuple(int(x) for x in self.gamma)
        if not g or g[0] != 0:
            raise SequenceError("schedule must start with gamma_0 = 0")
        if any(b <= a for a, b in zip(g, g[1:])):
            raise SequenceError("schedule must be strictly increasing")
        object.__setattr__(self, "gamma", g)

    def level(self, beta: int) -> int:
        """Index ``j`` with ``gamma_j <= beta < gamma_{j+1}`` (last level beyond)."""
        return bisect.bisect_right(self.gamma, beta) - 1

    def levels(self, beta: np.ndarray) -> np.ndarray:
        return np.searchsorted(np.asarray(self.gamma, dtype=np.int64), beta, side="right") - 1


def _log_window_ok(j: int, value: float) -> bool:
    if j % 2 == 1:
        return 0.0 <= value < 2.0**-j
    return 1.0 - 2.0**-j < value <= 1.0


def gamma_schedule(j_max: int, k_base: int = 3, cap: int = 10**4) -> SmoothSchedule:
    """Minimal schedule making the log-averages at ``N = 3^gamma_j`` oscillate.

    ``gamma_j`` is the least integer above ``gamma_{j-1}`` for which the
    log-average of the parity sequence (levels fixed by ``gamma_0..gamma_{j-1}``)
    lies in ``[0, 2^-j)`` for odd ``j`` and in ``(1 - 2^-j, 1]`` for even ``j``.
    """
    if j_max < 1:
        raise SequenceError("j_max must be at least 1")
    if k_base != 3:
        raise SequenceError("only the base-3 checkpoint ladder is supported")
    gam = [0]
    parts: list[float] = []
    prev = None  # (H, beta) of the last smooth number seen
    j, g, best = 1, 0, None
    target = lambda jj: 0.0 if jj % 2 else 1.0
    while j <= j_max:
        sched = SmoothSchedule(tuple(gam))
        for (x, a, b) in smooth_window(g):
            if prev is not None and sched.level(prev[1]) % 2 == 1:
                parts.append(harmonic_diff(prev[0], x))
            prev = (x, b)
            if x != 3**g or g <= gam[-1]:
                continue
            # every interval below N = 3^g is now accounted for
            val = math.fsum(parts) / (g * math.log(3))
            if best is None or abs(val - target(j)) < abs(best[1] - target(j)):
                best = (g, val)
            if _log_window_ok(j, val):
                gam.append(g)
                sched = SmoothSchedule(tuple(gam))
                j, best = j + 1, None
                if j > j_max:
                    break
            elif g - gam[-1] >= cap:
                raise ScheduleError(
                    f"gamma_{j}: no admissible value within cap {cap} above {gam[-1]}; "
                    f"closest log-average {best[1]:.6g} at gamma={best[0]}"
                )
        g += 1
    return SmoothSchedule(tuple(gam))


# sequences ------------------------------------------------------------------


def _smooth_arrays(limit: int):
    lim = min(limit, INDEX_MAX)
    rows = smooth_enumeration(lim)
    H = np.array([r[0] for r in rows], dtype=np.int64)
    B = np.array([r[2] for r in rows], dtype=np.int64)
    return H, B


class _SmoothTable:
    """Smooth numbers up to a bound that doubles on demand (thread-safe)."""

    def __init__(self, initial: int = 1 << 12):
        self._lock = threading.Lock()
        self._limit = initial
        self._arrays = _smooth_arrays(initial)

    def get(self, top: int):
        limit, arrays = self._limit, self._arrays
        if top <= limit:
            return arrays
        with self._lock:
            while self._limit < top:
                self._limit = min(2 * self._limit, INDEX_MAX)
            self._arrays = _smooth_arrays(self._limit)
            return self._arrays


_TABLE = _SmoothTable()


def smooth_parity_sequence(sched: SmoothSchedule) -> Sequence:
    """``a_0 = 0``; on ``[H_i, H_{i+1})`` the parity of the level of ``beta_i``."""
    if not isinstance(sched, SmoothSchedule):
        sched = SmoothSchedule(tuple(sched))

    def fn(idx):
        out = np.zeros(idx.shape, dtype=np.int64)
        if idx.size == 0:
            return out
        H, B = _TABLE.get(int(idx.max()))
        pos = idx > 0
        i = np.searchsorted(H, idx[pos], side="right") - 1
        out[pos] = sched.levels(B[i]) % 2
        return out

    def runs(N: int):
        out = [(0, 1, 0)] if N > 0 else []
        prev = None
        for (h, a, b) in iter_smooth_below(N):
            if prev is not None:
                out.append((prev[0], h, sched.level(prev[1]) % 2))
            prev = (h, b)
        if prev is not None:
            out.append((prev[0], N, sched.level(prev[1]) % 2))
        return out

    return Sequence(Alphabet((0, 1)), fn, "smooth_parity", {"gamma": list(sched.gamma)}, runs=runs)


def smooth_index(n: int) -> tuple[int, int, int]:
    """``(H_i, alpha_i, beta_i)`` for the interval ``[H_i, H_{i+1})`` containing ``n >= 1``."""
    if n < 1:
        raise SequenceError("smooth intervals start at 1")
    best = (1, 0, 0)
    p3, b = 1, 0
    while p3 <= n:
        a = (n // p3).bit_length() - 1
        h = p3 << a
        if h > best[0]:
            best = (h, a, b)
        p3 *= 3
        b += 1
    return best
