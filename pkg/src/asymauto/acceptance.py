"""The twelve desk-scale acceptance checks.

Each check returns a :class:`CriterionResult` whose ``report`` is a plain
JSON document. Reports contain no timings, so they are expected to be
byte-identical across runs and worker counts; criterion 12 verifies that.
Wall-clock budgets are checked separately and kept out of the report.
"""

from __future__ import annotations

import hashlib
import json
import math
import os
import time
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .kernel.bases import base_closure
from .kernel.clustering import cluster_kernel, structure_extract
from .kernel.exact import exact_kernel_dfao
from .regular.linrep import digit_sum_rep, identity_rep, square_rep
from .regular.rank import detect_linear_recurrence, kernel_rank
from .seqcore.dfao import BUILTIN_DFAOS, dfao_sequence, thue_morse
from .seqcore.multiplicative import (
    ZERO,
    character_spec,
    dirichlet_character,
    liouville,
    liouville_spec,
    mobius_spec,
    p_local,
)
from .seqcore.smooth import gamma_schedule, smooth_parity_sequence
from .seqcore.sturmian import patched_sturmian, sturmian
from .seqcore.theta import theta_frequency_sequence
from .seqcore.core import constant
from .stats.complexity import asymptotic_subword_complexity, subword_complexity
from .stats.decompose import DAGGER, DOUBLE_DAGGER, greedy_decompose
from .stats.frequency import freq, shift_invariance
from .stats.multiplicative import mult_distance_sq
from .stats.smoothlog import log_osc_check
from .regular.linrep import NumericSequence


@dataclass
class CriterionResult:
    number: int
    title: str
    checks: list  # (name, passed, detail)
    report: dict
    elapsed: float = 0.0
    budget: float | None = None  # seconds; checked outside the report

    @property
    def within_budget(self) -> bool:
        return self.budget is None or self.elapsed <= self.budget

    @property
    def passed(self) -> bool:
        return all(ok for _, ok, _ in self.checks) and self.within_budget

    def line(self) -> str:
        tag = "PASS" if self.passed else "FAIL"
        failed = [name for name, ok, _ in self.checks if not ok]
        if not self.within_budget:
            failed.append(f"runtime {self.elapsed:.1f}s > {self.budget:.0f}s")
        extra = f"  failed: {'; '.join(failed)}" if failed else ""
        return f"criterion {self.number:2d} [{tag}] {self.title}{extra}"

    def report_bytes(self) -> bytes:
        doc = {"criterion": self.number, "title": self.title,
               "checks": [{"name": n, "passed": bool(ok), "detail": d} for n, ok, d in self.checks],
               "report": self.report}
        return (json.dumps(doc, sort_keys=True, indent=1, default=_jsonable) + "\n").encode()


def _jsonable(x):
    if isinstance(x, (np.integer,)):
        return int(x)
    if isinstance(x, (np.floating,)):
        return float(x)
    if isinstance(x, Fraction):
        return str(x)
    if isinstance(x, np.ndarray):
        return x.tolist()
    raise TypeError(f"cannot serialize {type(x).__name__}")


def _decreasing(xs) -> bool:
    return all(a > b for a, b in zip(xs, xs[1:]))


def _violation_density(mask: np.ndarray, checkpoints) -> list[float]:
    cs = np.concatenate([[0], np.cumsum(mask, dtype=np.int64)])
    return [int(cs[c]) / c for c in checkpoints]


# 1 --------------------------------------------------------------------------------


def criterion_1(workers: int = 1) -> CriterionResult:
    theta = "sqrt(2)/2"
    a = theta_frequency_sequence(theta)
    N = 1 << 22
    est = freq(a, [1], N, workers=workers)
    d = est.densities[-1]
    target = 1 / math.sqrt(2)
    M = 1 << 20
    n = np.arange(1, M, dtype=np.int64)
    bad = int(np.count_nonzero(a.codes(n) != a.codes(2 * n)))
    checks = [
        ("|freq(1) - 1/sqrt2| <= 0.02 at N=2^22", abs(d - target) <= 0.02, f"freq={d!r}, gap={d - target!r}"),
        ("a_n = a_2n for 1 <= n < 2^20", bad == 0, f"violations={bad}"),
    ]
    return CriterionResult(1, "theta-frequency construction", checks,
                           {"theta": theta, "frequency": est.to_dict(), "a_n_vs_a_2n_violations": bad},
                           budget=60.0)


# 2 --------------------------------------------------------------------------------


def criterion_2(workers: int = 1) -> CriterionResult:
    a = theta_frequency_sequence("1/2")
    cl = cluster_kernel(a, k=2, depth=6, N=1 << 20, eps=0.05, workers=workers)
    cps = [1 << 16, 1 << 18, 1 << 20]
    n = np.arange(cps[-1], dtype=np.int64)
    dens = _violation_density(a.codes(n) != a.codes(2 * n + 1), cps)
    checks = [
        ("one kernel class at depth 6, N=2^20, eps=0.05", cl.class_count == 1,
         f"classes={cl.class_count}, per_depth={cl.per_depth}, inconclusive={len(cl.inconclusive)}"),
        ("a_n != a_2n+1 density decreasing over 2^16, 2^18, 2^20", _decreasing(dens), f"densities={dens}"),
    ]
    rep = {"class_count": cl.class_count, "per_depth": cl.per_depth, "inconclusive": len(cl.inconclusive),
           "representatives": [list(r) for r in cl.representatives()], "odd_violation_densities": dens}
    return CriterionResult(2, "theta-kernel triviality", checks, rep)


# 3 --------------------------------------------------------------------------------


def criterion_3(workers: int = 1) -> CriterionResult:
    sched = gamma_schedule(3)
    a = smooth_parity_sequence(sched)
    N = 10**6
    from .kernel.discrepancy import default_ladder

    cps = list(default_ladder(N))
    c = a.codes_range(2 * N + 1, workers=workers)
    n = np.arange(N)
    mask = (c[n] != c[n + 1]) | (c[n] != c[2 * n])
    dens = _violation_density(mask, cps)
    checks = [
        ("violation density <= 0.05 at N=10^6", dens[-1] <= 0.05, f"density={dens[-1]!r}"),
        ("violation density decreasing across the ladder", _decreasing(dens), f"densities={dens}"),
    ]
    return CriterionResult(3, "smooth parity sequence invariance", checks,
                           {"gamma": list(sched.gamma), "checkpoints": cps, "densities": dens})


# 4 --------------------------------------------------------------------------------


def criterion_4(workers: int = 1) -> CriterionResult:
    sched = gamma_schedule(3)
    a = smooth_parity_sequence(sched)
    res = [log_osc_check(a, sched, j) for j in (1, 2, 3)]
    checks = [(f"log-average at N=3^{r.exponent} in {r.window}", r.passed, f"value={r.value!r}") for r in res]
    return CriterionResult(4, "log-frequency oscillation", checks,
                           {"gamma": list(sched.gamma), "levels": [r.to_dict() for r in res]})


# 5 --------------------------------------------------------------------------------


def criterion_5(workers: int = 1) -> CriterionResult:
    checks, rep = [], {}
    tm = exact_kernel_dfao(BUILTIN_DFAOS["thue_morse"]())
    checks.append(("exact Thue-Morse kernel has 2 elements", tm.size == 2, f"size={tm.size}"))
    for name, make in BUILTIN_DFAOS.items():
        m = make()
        ex = exact_kernel_dfao(m)
        cl = cluster_kernel(dfao_sequence(m), k=m.k, depth=6, N=1 << 16, eps=0.01, workers=workers)
        ok = cl.class_count == ex.size and not cl.inconclusive
        checks.append((f"{name}: clustering matches exact kernel", ok,
                       f"exact={ex.size}, clustered={cl.class_count}, inconclusive={len(cl.inconclusive)}"))
        rep[name] = {"exact": ex.size, "clustered": cl.class_count, "inconclusive": len(cl.inconclusive),
                     "per_depth": cl.per_depth}
    return CriterionResult(5, "exact kernels vs clustering", checks, rep)


# 6 --------------------------------------------------------------------------------


def criterion_6(workers: int = 1) -> CriterionResult:
    tm = subword_complexity(thue_morse(), 3, 1 << 16, workers=workers)
    fib = subword_complexity(sturmian("(sqrt(5)-1)/2", 0), 24, 10**6, workers=workers)
    want = tuple(range(2, 26))
    checks = [
        ("Thue-Morse p(1..3) = 2, 4, 6", tm.p == (2, 4, 6), f"p={list(tm.p)}"),
        ("Fibonacci p(l) = l + 1 for l = 1..24 at N=10^6", fib.p == want, f"p={list(fib.p)}"),
    ]
    return CriterionResult(6, "subword complexity", checks,
                           {"thue_morse": list(tm.p), "fibonacci": list(fib.p)})


# 7 --------------------------------------------------------------------------------


def criterion_7(workers: int = 1) -> CriterionResult:
    checks, rep = [], {}
    N = 1 << 20
    for name, make in BUILTIN_DFAOS.items():
        m = make()
        a = dfao_sequence(m)
        st = structure_extract(a, k=m.k, depth=6, N=N, eps=0.01, workers=workers)
        prof = asymptotic_subword_complexity(a, 12, N, tau=1e-3, workers=workers)
        A = m.alphabet.size
        bound = [m.k * A ** (2 * st.d) * L for L in prof.lengths]
        ok = all(p <= b for p, b in zip(prof.p_tilde, bound))
        checks.append((f"{name}: p~(l) <= k |Omega|^(2d) l for l = 1..12", ok,
                       f"d={st.d}, p~={list(prof.p_tilde)}"))
        rep[name] = {"d": st.d, "p_tilde": list(prof.p_tilde), "bound": bound}
    return CriterionResult(7, "asymptotic complexity linearity", checks, rep)


# 8 --------------------------------------------------------------------------------


def criterion_8(workers: int = 1) -> CriterionResult:
    N = 10**6
    theta = "(sqrt(5)-1)/2"
    cases = {
        "sturmian": (sturmian(theta, 0), DAGGER, None),
        "constant": (constant(0), DAGGER, None),
        "patched": (patched_sturmian(theta, ["0", "0.3", "0.7"], [100, 10**4, 10**6]), DOUBLE_DAGGER,
                    [100, 10100]),
    }
    checks, rep = [], {}
    for name, (a, want, truth) in cases.items():
        dec = greedy_decompose(a, N, tau=1e-3)
        prefix = a.codes_range(N, workers=workers)
        exact = np.array_equal(dec.concatenation(), prefix) and not dec.pruned
        checks.append((f"{name}: case {want}", dec.case == want, f"case={dec.case}"))
        checks.append((f"{name}: concatenation reproduces the prefix", exact, ""))
        if truth is not None:
            near = len(dec.boundaries) == len(truth) and all(
                abs(b - t) <= 64 for b, t in zip(dec.boundaries, truth))
            checks.append((f"{name}: boundaries within 64 of {truth}", near, f"boundaries={dec.boundaries}"))
        rep[name] = dec.to_dict()
    return CriterionResult(8, "greedy decomposition", checks, rep)


# 9 --------------------------------------------------------------------------------


def criterion_9(workers: int = 1) -> CriterionResult:
    cases = [((8,), 2, True), ((2,), 6, False), ((2, 3), 6, True), ((2, 3), 12, True), ((2, 3), 5, False)]
    checks, rep = [], []
    for bases, k, want in cases:
        got = base_closure(bases).member(k)
        checks.append((f"member({set(bases)}, {k}) = {'yes' if want else 'no'}", got == want, f"got={got}"))
        rep.append({"bases": list(bases), "k": k, "member": got})
    return CriterionResult(9, "base closure", checks, {"cases": rep})


# 10 -------------------------------------------------------------------------------


def criterion_10(workers: int = 1) -> CriterionResult:
    M = 1 << 20
    n = np.arange(M, dtype=np.int64)
    vals = np.asarray(digit_sum_rep().eval_many(n), dtype=np.int64)
    pop = np.array([bin(x).count("1") for x in range(M)], dtype=np.int64)
    pop_ok = bool(np.array_equal(vals, pop))
    tm = thue_morse()
    tm_pm = NumericSequence(lambda idx: 1 - 2 * tm.codes(idx).astype(np.int64), "thue_morse_pm")
    r_n = kernel_rank(identity_rep(), 2, 3, 256)
    r_sq = kernel_rank(square_rep(), 2, 3, 256)
    r_tm = kernel_rank(tm_pm, 2, 4, 256)
    w_n = detect_linear_recurrence(identity_rep(), 4096, 8)
    w_s2 = detect_linear_recurrence(digit_sum_rep(), 4096, 8)
    coeffs = tuple(w_n.coefficients) if w_n else None
    checks = [
        ("s_2 representation equals popcount for n < 2^20", pop_ok, ""),
        ("kernel rank of n is 2", r_n.rank == 2, r_n.note),
        ("kernel rank of n^2 is 3", r_sq.rank == 3, r_sq.note),
        ("kernel rank of Thue-Morse +-1 is 2", r_tm.rank == 2, r_tm.note),
        ("recurrence (2, -1) for a_n = n", coeffs == (2, -1), f"found={coeffs}"),
        ("no recurrence for s_2 with d_max=8, N=4096", w_s2 is None,
         "none" if w_s2 is None else f"found={w_s2.to_dict()}"),
    ]
    rep = {"popcount_match": pop_ok, "ranks": {"n": r_n.rank, "n^2": r_sq.rank, "thue_morse_pm": r_tm.rank},
           "recurrence_n": w_n.to_dict() if w_n else None, "recurrence_s2": w_s2.to_dict() if w_s2 else None}
    return CriterionResult(10, "regular engine", checks, rep)


# 11 -------------------------------------------------------------------------------


def _sieve_primes(P: int) -> list[int]:
    flags = bytearray([1]) * (P + 1)
    flags[0:2] = b"\x00\x00"
    for p in range(2, math.isqrt(P) + 1):
        if flags[p]:
            flags[p * p:: p] = bytearray(len(range(p * p, P + 1, p)))
    return [p for p in range(P + 1) if flags[p]]


def _reconstruction_failures(spec, L: int) -> int:
    """Count ``n <= L`` where the product over ``p <= L`` of ``a^(p)_n`` differs from ``a_n``."""
    idx = np.arange(1, L + 1, dtype=np.int64)
    target = spec.exponents(idx)
    acc = np.zeros(L, dtype=np.int64)
    zero = np.zeros(L, dtype=bool)
    for p in _sieve_primes(L):
        e = p_local(spec, p).exponents(idx)
        zero |= e == ZERO
        acc = (acc + np.where(e == ZERO, 0, e)) % spec.order
    got = np.where(zero, ZERO, acc)
    return int(np.count_nonzero(got != target))


def criterion_11(workers: int = 1) -> CriterionResult:
    chi = dirichlet_character(4, 1)
    chi_vals = [chi.eval(n) for n in range(4)]
    r_chi = shift_invariance(chi, 4, 1 << 20, workers=workers)
    r_liou = shift_invariance(liouville(), 1, 10**6, workers=workers)
    P = 10**5
    dist = mult_distance_sq(liouville_spec(), lambda p: 1, P)
    oracle = math.fsum(2.0 / p for p in _sieve_primes(P))
    fails = {name: _reconstruction_failures(s, 10**4)
             for name, s in (("liouville", liouville_spec()), ("mobius", mobius_spec()),
                             ("chi_4", character_spec(4, 1)))}
    checks = [
        ("chi mod 4 is the non-principal character", chi_vals == [0, 1, 0, -1], f"values={chi_vals}"),
        ("chi mod 4 shift by 4 has density 0", r_chi.densities[-1] == 0, f"density={r_chi.densities[-1]!r}"),
        ("Liouville shift-by-1 discrepancy >= 0.3 at N=10^6", r_liou.densities[-1] >= 0.3,
         f"density={r_liou.densities[-1]!r}"),
        ("D(liouville, 1)^2 at P=10^5 matches sum 2/p to 1e-9", abs(dist - oracle) <= 1e-9,
         f"distance^2={dist!r}, oracle={oracle!r}"),
        ("product of p-local parts reconstructs a_n for n <= 10^4", all(v == 0 for v in fails.values()),
         f"failures={fails}"),
    ]
    rep = {"chi4_shift": r_chi.to_dict(), "liouville_shift": r_liou.to_dict(),
           "distance_sq": dist, "oracle": oracle, "reconstruction_failures": fails}
    return CriterionResult(11, "multiplicative diagnostics", checks, rep)


CRITERIA = {i: globals()[f"criterion_{i}"] for i in range(1, 12)}
TITLES = {1: "theta-frequency construction", 2: "theta-kernel triviality", 3: "smooth parity sequence invariance",
          4: "log-frequency oscillation", 5: "exact kernels vs clustering", 6: "subword complexity",
          7: "asymptotic complexity linearity", 8: "greedy decomposition", 9: "base closure",
          10: "regular engine", 11: "multiplicative diagnostics", 12: "determinism"}


def run_criterion(i: int, workers: int = 1) -> CriterionResult:
    t0 = time.perf_counter()
    res = CRITERIA[i](workers=workers)
    res.elapsed = time.perf_counter() - t0
    return res


def write_reports(results, out_dir: str) -> dict[int, str]:
    os.makedirs(out_dir, exist_ok=True)
    paths = {}
    for r in results:
        path = os.path.join(out_dir, f"criterion_{r.number:02d}.json")
        with open(path, "wb") as fh:
            fh.write(r.report_bytes())
        paths[r.number] = path
    return paths


def criterion_12(baseline: dict | None = None, numbers=None, out_dir: str | None = None) -> CriterionResult:
    """Re-run criteria with 1, 1 and 8 workers and compare report bytes.

    ``baseline`` may hold results of an earlier 1-worker run to save one pass.
    """
    numbers = sorted(numbers or CRITERIA)
    runs = []
    if baseline is None:
        baseline = {i: run_criterion(i, 1) for i in numbers}
    runs.append(("workers=1 (first)", {i: baseline[i].report_bytes() for i in numbers}))
    runs.append(("workers=1 (second)", {i: run_criterion(i, 1).report_bytes() for i in numbers}))
    runs.append(("workers=8", {i: run_criterion(i, 8).report_bytes() for i in numbers}))
    if out_dir:
        for label, reps in runs:
            sub = os.path.join(out_dir, label.replace(" ", "_").replace("(", "").replace(")", "").replace("=", ""))
            os.makedirs(sub, exist_ok=True)
            for i, b in reps.items():
                with open(os.path.join(sub, f"criterion_{i:02d}.json"), "wb") as fh:
                    fh.write(b)
    ref = runs[0][1]
    checks = []
    for i in numbers:
        same_runs = runs[1][1][i] == ref[i]
        same_workers = runs[2][1][i] == ref[i]
        checks.append((f"criterion {i}: identical across two runs", same_runs, ""))
        checks.append((f"criterion {i}: identical for 1 vs 8 workers", same_workers, ""))
    digests = {str(i): hashlib.sha256(ref[i]).hexdigest() for i in numbers}
    return CriterionResult(12, "determinism", checks, {"sha256": digests})


def run_all(workers: int = 1, out_dir: str | None = None, determinism: bool = True, echo=print) -> list:
    results = []
    for i in sorted(CRITERIA):
        r = run_criterion(i, workers)
        results.append(r)
        if echo:
            echo(r.line())
    if determinism:
        base = {r.number: r for r in results} if workers == 1 else None
        r12 = criterion_12(base)
        results.append(r12)
        if echo:
            echo(r12.line())
    if out_dir:
        write_reports(results, out_dir)
    return results
