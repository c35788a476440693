"""Command-line workbench.

Exit status: 0 on success, 1 when an analysis fails (or a verify run has a
failing criterion), 2 for configuration errors.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
import warnings

from .config import ANALYSES, ExperimentConfig, parse_spec
from .seqcore.core import Sequence, SequenceError
from .seqcore.spec import SequenceSpec, SpecError, load_json
from .stats import export

REGULAR_HORIZON = 4096  # exact arithmetic caps the horizon of the regular analysis
RANK_HORIZON = 512

EXIT_OK, EXIT_ANALYSIS, EXIT_CONFIG = 0, 1, 2


def _need_symbolic(a, analysis):
    if not isinstance(a, Sequence):
        raise SpecError(f"analysis {analysis!r} needs a finite-alphabet sequence, not a numeric one", "sequence")
    return a


def _structured(cfg: ExperimentConfig, result: dict, notes: list[str] | None = None) -> str:
    doc = {"header": cfg.header(), "result": result}
    if notes:
        doc["notes"] = notes
    return json.dumps(doc, sort_keys=True, indent=1, default=str) + "\n"


def _run_generate(cfg, a):
    N = cfg.params.N
    if isinstance(a, Sequence):
        vals = a.eval_range(N, workers=cfg.workers)
    else:
        vals = a.prefix(N)
    if cfg.format == "structured":
        return _structured(cfg, {"values": [v if isinstance(v, int) else str(v) for v in vals]})
    return export.to_csv(["n", "value"], enumerate(vals), cfg.header())


def _run_kernel(cfg, a):
    from .kernel.clustering import cluster_kernel

    p = cfg.params
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        cl = cluster_kernel(_need_symbolic(a, "kernel"), p.k, p.depth, p.N, p.eps,
                            p.checkpoints, workers=cfg.workers)
    if cfg.format == "structured":
        return _structured(cfg, cl.to_dict(), cl.warnings)
    comments = cfg.header() + [f"warning: {w}" for w in cl.warnings]
    comments.append(f"inconclusive={len(cl.inconclusive)}")
    return export.class_count_csv(cl.per_depth, comments)


def _default_word(a: Sequence) -> list:
    """The symbol 1 when the alphabet has it, otherwise the first symbol."""
    syms = a.alphabet.symbols
    return [1] if 1 in syms else [syms[0]]


def _run_freq(cfg, a, log: bool):
    from .stats.frequency import freq, logfreq

    p = cfg.params
    a = _need_symbolic(a, cfg.analysis)
    word = p.word if p.word is not None else _default_word(a)
    if log:
        est = logfreq(a, word, p.N, p.checkpoints, p.normalization, workers=cfg.workers)
    else:
        est = freq(a, word, p.N, p.checkpoints, workers=cfg.workers)
    if cfg.format == "structured":
        return _structured(cfg, est.to_dict())
    comments = cfg.header() + [f"word={word} kind={est.kind} normalization={est.normalization}"]
    return export.to_csv(["N", "count", "density"], zip(est.checkpoints, est.counts, est.densities), comments)


def _run_complexity(cfg, a):
    from .stats.complexity import asymptotic_subword_complexity

    p = cfg.params
    prof = asymptotic_subword_complexity(_need_symbolic(a, "complexity"), p.l_max, p.N, p.tau,
                                         workers=cfg.workers)
    if cfg.format == "structured":
        return _structured(cfg, {"l": list(prof.lengths), "p": list(prof.p), "p_tilde": list(prof.p_tilde),
                                 "p_tilde_half": list(prof.p_tilde_half), "tau": prof.tau, "N": prof.N})
    return export.complexity_csv(prof, cfg.header())


def _run_decompose(cfg, a):
    from .stats.decompose import greedy_decompose

    p = cfg.params
    dec = greedy_decompose(_need_symbolic(a, "decompose"), p.N, p.tau)
    if cfg.format == "structured":
        return _structured(cfg, dec.to_dict())
    rows, start = [], 0
    for j, b in enumerate(dec.blocks):
        rows.append((j, "block", start, int(b.size)))
        start += int(b.size)
    rows.append((len(dec.blocks), "tail", start, int(dec.tail.size)))
    return export.to_csv(["index", "part", "start", "length"], rows, cfg.header() + [f"case={dec.case}"])


def _run_regular(cfg, a):
    from .regular.rank import detect_linear_recurrence, kernel_rank

    p = cfg.params
    H = min(p.N, REGULAR_HORIZON)
    Hr = min(p.N, RANK_HORIZON)
    depth = min(p.depth, 4)
    kr = kernel_rank(a, p.k, depth, Hr)
    wit = detect_linear_recurrence(a, H, p.d_max)
    notes = [f"recurrence horizon={H} rank horizon={Hr} rank depth={depth}", kr.note]
    if cfg.format == "structured":
        return _structured(cfg, {"kernel_rank": kr.rank, "kernel_rank_half": kr.rank_half, "stable": kr.stable,
                                 "witness": wit.to_dict() if wit else None}, notes)
    rows = [wit.csv_row()] if wit else []
    comments = cfg.header() + notes + [f"kernel_rank={kr.rank}"] + ([] if wit else ["no recurrence found"])
    return export.to_csv(["order", "coefficients", "horizon", "violations"], rows, comments)


def run(cfg: ExperimentConfig) -> tuple[int, str]:
    """Execute one analysis and return ``(exit status, report text)``."""
    if cfg.analysis == "verify":
        return _run_verify(cfg)
    a = cfg.sequence.build()
    handlers = {
        "generate": _run_generate,
        "kernel": _run_kernel,
        "freq": lambda c, s: _run_freq(c, s, False),
        "logfreq": lambda c, s: _run_freq(c, s, True),
        "complexity": _run_complexity,
        "decompose": _run_decompose,
        "regular": _run_regular,
    }
    return EXIT_OK, handlers[cfg.analysis](cfg, a)


def _run_verify(cfg: ExperimentConfig, quick: bool = False) -> tuple[int, str]:
    from . import acceptance

    results = acceptance.run_all(workers=cfg.workers, out_dir=cfg.out, determinism=not quick,
                                 echo=lambda s: print(s, flush=True))
    ok = all(r.passed for r in results)
    print(f"{sum(r.passed for r in results)}/{len(results)} criteria passed", flush=True)
    return (EXIT_OK if ok else EXIT_ANALYSIS), ""


def _read_spec(arg: str):
    text = arg if arg.lstrip().startswith("{") else open(arg, encoding="utf-8").read()
    return load_json(text, "spec" if arg.lstrip().startswith("{") else arg)


def build_config(ns: argparse.Namespace) -> ExperimentConfig:
    if ns.command == "verify":
        cfg = ExperimentConfig("verify")
    else:
        if not ns.spec:
            raise SpecError(f"analysis {ns.command!r} needs --spec", "spec")
        doc = _read_spec(ns.spec)
        if isinstance(doc, dict) and "analysis" in doc:
            from dataclasses import replace

            from .config import config_from_dict

            cfg = replace(config_from_dict(doc), analysis=ns.command).validate()
        else:
            cfg = ExperimentConfig(ns.command, SequenceSpec.from_dict(doc))
    over = {"N": ns.n, "depth": ns.depth, "eps": ns.eps, "tau": ns.tau, "out": ns.out,
            "format": ns.format, "workers": ns.workers}
    for key in ("word", "l_max", "d_max", "k", "normalization"):
        over[key] = getattr(ns, key, None)
    if getattr(ns, "checkpoints", None):
        try:
            over["checkpoints"] = tuple(int(x) for x in ns.checkpoints.split(","))
        except ValueError:
            raise SpecError("--checkpoints must be a comma-separated list of integers", "checkpoints") from None
    return cfg.with_overrides(**over)


def make_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="asymauto", description=__doc__.splitlines()[0])
    sub = ap.add_subparsers(dest="command", required=True)
    for name in ANALYSES:
        sp = sub.add_parser(name)
        sp.add_argument("--spec", help="sequence or experiment document (path or inline JSON)")
        sp.add_argument("--n", type=int, help="prefix length N")
        sp.add_argument("--depth", type=int)
        sp.add_argument("--eps", type=float)
        sp.add_argument("--tau", type=float)
        sp.add_argument("--out", help="output file (verify: report directory)")
        sp.add_argument("--format", choices=("csv", "structured"))
        sp.add_argument("--workers", type=int)
        sp.add_argument("--checkpoints", help="comma-separated checkpoint ladder")
        sp.add_argument("--k", type=int, help="base of the kernel")
        if name in ("freq", "logfreq"):
            sp.add_argument("--word")
        if name == "logfreq":
            sp.add_argument("--normalization", choices=("log", "harmonic"))
        if name == "complexity":
            sp.add_argument("--l-max", dest="l_max", type=int)
        if name == "regular":
            sp.add_argument("--d-max", dest="d_max", type=int)
        if name == "verify":
            sp.add_argument("--quick", action="store_true", help="skip the determinism re-runs")
    return ap


def main(argv=None) -> int:
    ns = make_parser().parse_args(argv)
    try:
        cfg = build_config(ns)
    except SpecError as e:
        print(f"config error: {e}", file=sys.stderr)
        return EXIT_CONFIG
    except OSError as e:
        print(f"config error: {e}", file=sys.stderr)
        return EXIT_CONFIG
    try:
        if cfg.analysis == "verify":
            status, text = _run_verify(cfg, quick=getattr(ns, "quick", False))
        else:
            status, text = run(cfg)
    except SpecError as e:
        print(f"config error: {e}", file=sys.stderr)
        return EXIT_CONFIG
    except (SequenceError, ValueError, OverflowError, ArithmeticError, MemoryError) as e:
        print(f"analysis error: {e}", file=sys.stderr)
        return EXIT_ANALYSIS
    if text:
        if cfg.out:
            d = os.path.dirname(cfg.out)
            if d:
                os.makedirs(d, exist_ok=True)
            with open(cfg.out, "w", encoding="utf-8", newline="\n") as fh:
                fh.write(text)
        else:
            sys.stdout.write(text)
    return status


__all__ = ["main", "run", "parse_spec", "build_config", "make_parser"]

if __name__ == "__main__":
    sys.exit(main())
