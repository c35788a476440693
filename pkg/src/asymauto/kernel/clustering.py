"""Kernel elements, density-based clustering of the k-kernel, and pumping."""

from __future__ import annotations

import itertools
import warnings
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from ..seqcore.core import INDEX_MAX, Sequence
from .discrepancy import (
    EQUAL,
    INCONCLUSIVE,
    DiscrepancyReport,
    _strided_mismatch,
    default_ladder,
    discrepancy_density,
    early_report,
    stop_count,
)

MATERIALIZE_CAP = 1 << 27
STOP_BLOCK = 1 << 12


@dataclass(frozen=True, order=True)
class KernelAddress:
    i: int
    r: int
    k: int = 2

    def __post_init__(self):
        if self.i < 0 or not 0 <= self.r < self.k**self.i:
            raise ValueError(f"invalid kernel address ({self.i}, {self.r}) in base {self.k}")

    def word(self) -> str:
        if self.i == 0:
            return ""
        digits = []
        r = self.r
        for _ in range(self.i):
            r, d = divmod(r, self.k)
            digits.append(str(d))
        return "".join(reversed(digits))

    @classmethod
    def from_word(cls, w: str, k: int = 2) -> "KernelAddress":
        r = 0
        for ch in w:
            d = int(ch)
            if not 0 <= d < k:
                raise ValueError(f"digit {ch} out of range for base {k}")
            r = r * k + d
        return cls(len(w), r, k)

    def pair(self) -> tuple[int, int]:
        return (self.i, self.r)


def kernel_element(a: Sequence, addr: KernelAddress | tuple, k: int | None = None) -> Sequence:
    """``b_n = a_{k^i n + r}``."""
    if not isinstance(addr, KernelAddress):
        addr = KernelAddress(addr[0], addr[1], k or 2)
    step, off = addr.k**addr.i, addr.r

    def fn(idx):
        if idx.size and int(idx.max()) > (INDEX_MAX - off) // step:
            raise OverflowError(f"index k^{addr.i} n + {off} leaves the 64-bit range")
        return a.codes(idx * step + off)

    return Sequence(a.alphabet, fn, f"{a.tag}[{addr.k}^{addr.i} n+{off}]", {"base": a.tag})


class UnionFind:
    """Union-find whose class representative is the least element."""

    def __init__(self):
        self.parent: dict = {}

    def add(self, x):
        self.parent.setdefault(x, x)

    def find(self, x):
        root = x
        while self.parent[root] != root:
            root = self.parent[root]
        while self.parent[x] != root:
            self.parent[x], x = root, self.parent[x]
        return root

    def union(self, x, y):
        rx, ry = self.find(x), self.find(y)
        if rx == ry:
            return rx
        lo, hi = (rx, ry) if rx < ry else (ry, rx)
        self.parent[hi] = lo
        return lo

    def classes(self) -> dict:
        out: dict = {}
        for x in sorted(self.parent):
            out.setdefault(self.find(x), []).append(x)
        return out


@dataclass
class KernelClustering:
    k: int
    depth: int
    N: int
    eps: float
    checkpoints: tuple
    addresses: list
    uf: UnionFind
    per_depth: list  # (depth, class count among addresses of depth <= i)
    merges: list = field(default_factory=list)  # (address, representative, report)
    inconclusive: list = field(default_factory=list)
    warnings: list = field(default_factory=list)

    @property
    def class_count(self) -> int:
        return len(self.uf.classes())

    def representatives(self) -> list:
        return sorted(self.uf.classes())

    def to_dict(self) -> dict:
        cls = self.uf.classes()
        return {
            "k": self.k,
            "depth": self.depth,
            "N": self.N,
            "eps": self.eps,
            "checkpoints": list(self.checkpoints),
            "class_count": len(cls),
            "classes": [{"representative": list(rep), "members": [list(m) for m in mem]}
                        for rep, mem in sorted(cls.items())],
            "per_depth": [{"depth": d, "classes": c} for d, c in self.per_depth],
            "merges": [{"address": list(a), "into": list(b), "evidence": r.to_dict()}
                       for a, b, r in self.merges],
            "inconclusive": [{"address": list(a), "against": list(b), "evidence": r.to_dict()}
                             for a, b, r in self.inconclusive],
            "warnings": list(self.warnings),
        }


class _KernelView:
    """Prefixes of kernel elements, materialized from one base array when small."""

    def __init__(self, a: Sequence, k: int, depth: int, N: int, workers: int):
        self.a, self.k, self.N, self.workers = a, k, N, workers
        total = k**depth * N
        self.base = a.codes_range(total, workers=workers) if total <= MATERIALIZE_CAP else None
        self._cache: dict = {}

    def compare(self, x: tuple, y: tuple, cps: np.ndarray, stop: int, eps: float) -> DiscrepancyReport:
        k, N = self.k, self.N
        if self.base is not None:
            out, reached, c = _strided_mismatch(self.base, k ** x[0], x[1], k ** y[0], y[1], N, cps, stop,
                                                STOP_BLOCK)
        else:
            from .discrepancy import _pair_mismatch

            out, reached, c = _pair_mismatch(self.prefix(x), self.prefix(y), N, cps, stop, STOP_BLOCK)
        return early_report(out, reached, c, N, tuple(int(v) for v in cps), eps)

    def prefix(self, addr: tuple) -> np.ndarray:
        got = self._cache.get(addr)
        if got is None:
            i, r = addr
            got = self.a.codes(np.arange(self.N, dtype=np.int64) * self.k**i + r)
            self._cache[addr] = got
        return got


def _max_depth(k: int, N: int, depth: int) -> int:
    d = depth
    while d > 0 and k**d * N > INDEX_MAX:
        d -= 1
    return d


def cluster_kernel(a: Sequence, k: int = 2, depth: int = 6, N: int = 1 << 20, eps: float = 0.01,
                   checkpoints=None, workers: int = 1) -> KernelClustering:
    """Group kernel addresses ``(i, r)``, ``i <= depth``, by the verdict rule.

    Addresses are visited depth-major, residue-minor; each is compared with the
    existing class representatives in creation order and joins the first one
    judged equal.
    """
    warn = []
    d_ok = _max_depth(k, N, depth)
    if d_ok < depth:
        msg = f"depth truncated from {depth} to {d_ok}: k^depth * N exceeds the 64-bit range"
        warnings.warn(msg)
        warn.append(msg)
        depth = d_ok
    cps = tuple(checkpoints) if checkpoints else default_ladder(N)
    cps_arr = np.asarray(cps, dtype=np.int64)
    stop = stop_count(N, eps)
    view = _KernelView(a, k, depth, N, workers)
    uf = UnionFind()
    reps: list = []
    out = KernelClustering(k, depth, N, eps, cps, [], uf, [], warnings=warn)
    pool = ThreadPoolExecutor(max_workers=workers) if workers > 1 else None
    try:
        for i in range(depth + 1):
            for r in range(k**i):
                addr = (i, r)
                uf.add(addr)
                out.addresses.append(addr)
                if pool is not None and len(reps) > 1:
                    reports = list(pool.map(lambda rep: view.compare(addr, rep, cps_arr, stop, eps), reps))
                else:
                    reports = None
                joined = False
                for j, rep in enumerate(reps):
                    rep_report = reports[j] if reports is not None else view.compare(addr, rep, cps_arr, stop, eps)
                    if rep_report.verdict == EQUAL:
                        uf.union(addr, rep)
                        out.merges.append((addr, rep, rep_report))
                        joined = True
                        break
                    if rep_report.verdict == INCONCLUSIVE:
                        out.inconclusive.append((addr, rep, rep_report))
                if not joined:
                    reps.append(addr)
            out.per_depth.append((i, len(reps)))
    finally:
        if pool is not None:
            pool.shutdown()
    return out


@dataclass
class Structure:
    d: int
    representatives: list
    phi: dict  # word -> class index
    inconclusive: list
    clustering: KernelClustering


def structure_extract(a: Sequence, k: int = 2, depth: int = 6, N: int = 1 << 20, eps: float = 0.01,
                      workers: int = 1) -> Structure:
    cl = cluster_kernel(a, k, depth, N, eps, workers=workers)
    reps = cl.representatives()
    index = {rep: j for j, rep in enumerate(reps)}
    phi = {}
    for i in range(cl.depth + 1):
        for digits in itertools.product(range(k), repeat=i):
            w = "".join(map(str, digits))
            addr = KernelAddress.from_word(w, k)
            phi[w] = index[cl.uf.find(addr.pair())]
    return Structure(len(reps), reps, phi, list(cl.inconclusive), cl)


@dataclass
class PumpReport:
    word: str
    split: tuple
    results: list  # (t, pumped word, report)
    truncated_at: int | None = None

    @property
    def all_equal(self) -> bool:
        return all(r.verdict == EQUAL for _, _, r in self.results)


def pump_test(a: Sequence, k: int, w: str, split: tuple, t_range, N: int, eps: float = 0.01,
              checkpoints=None, workers: int = 1) -> PumpReport:
    v, u, v2 = split
    if v + u + v2 != w:
        raise ValueError("split must concatenate to w")
    if not u:
        raise ValueError("pumped factor u must be non-empty")
    base = kernel_element(a, KernelAddress.from_word(w, k))
    results = []
    truncated = None
    for t in t_range:
        wt = v + u * t + v2
        if k ** len(wt) * N > INDEX_MAX:
            truncated = t
            break
        other = kernel_element(a, KernelAddress.from_word(wt, k))
        results.append((t, wt, discrepancy_density(base, other, N, checkpoints, eps, workers=workers)))
    return PumpReport(w, tuple(split), results, truncated)
