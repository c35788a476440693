"""Analysis defaults and experiment configuration documents."""

from __future__ import annotations

import json
from dataclasses import asdict, dataclass, field, replace

from .kernel.discrepancy import default_ladder
from .seqcore.core import INDEX_MAX
from .seqcore.spec import SequenceSpec, SpecError, load_json

ANALYSES = ("generate", "kernel", "freq", "logfreq", "complexity", "decompose", "regular", "verify")
FORMATS = ("csv", "structured")


@dataclass(frozen=True)
class Defaults:
    N: int = 1 << 20
    depth: int = 6
    eps: float = 0.01
    tau: float = 1e-3
    k: int = 2
    l_max: int = 12
    d_max: int = 8
    word: str | None = None  # None: the symbol 1 if present, else the first symbol
    normalization: str = "log"
    workers: int = 1

    def ladder(self, N: int | None = None) -> tuple:
        return default_ladder(self.N if N is None else N)


DEFAULTS = Defaults()


@dataclass(frozen=True)
class AnalysisParams:
    N: int = DEFAULTS.N
    depth: int = DEFAULTS.depth
    eps: float = DEFAULTS.eps
    tau: float = DEFAULTS.tau
    k: int = DEFAULTS.k
    l_max: int = DEFAULTS.l_max
    d_max: int = DEFAULTS.d_max
    word: str = DEFAULTS.word
    normalization: str = DEFAULTS.normalization
    checkpoints: tuple | None = None  # None: the 5-point ladder N/16 .. N

    def ladder(self) -> tuple:
        return tuple(self.checkpoints) if self.checkpoints else default_ladder(self.N)

    def validate(self) -> "AnalysisParams":
        def bad(key, why):
            raise SpecError(f"parameter {key!r} {why}", key)

        if not 1 <= self.N <= INDEX_MAX // 4:
            bad("N", f"must lie in [1, 2^61], got {self.N}")
        if not 0 <= self.depth <= 30:
            bad("depth", f"must lie in [0, 30], got {self.depth}")
        if not 0 < self.eps < 1:
            bad("eps", f"must lie in (0, 1), got {self.eps}")
        if not 0 < self.tau < 1:
            bad("tau", f"must lie in (0, 1), got {self.tau}")
        if not 2 <= self.k <= 16:
            bad("k", f"must lie in [2, 16], got {self.k}")
        if not 1 <= self.l_max <= 64:
            bad("l_max", f"must lie in [1, 64], got {self.l_max}")
        if not 1 <= self.d_max <= 64:
            bad("d_max", f"must lie in [1, 64], got {self.d_max}")
        if self.word is not None and not self.word:
            bad("word", "must be non-empty")
        if self.normalization not in ("log", "harmonic"):
            bad("normalization", f"must be log or harmonic, got {self.normalization!r}")
        if self.checkpoints is not None:
            cps = list(self.checkpoints)
            if not cps or any(not 1 <= c <= self.N for c in cps) or cps != sorted(set(cps)):
                bad("checkpoints", "must be strictly increasing values in [1, N]")
        return self


_PARAM_TYPES = {"N": int, "depth": int, "eps": float, "tau": float, "k": int, "l_max": int,
                "d_max": int, "word": str, "normalization": str, "checkpoints": list}


def _coerce_params(raw: dict) -> AnalysisParams:
    if not isinstance(raw, dict):
        raise SpecError("'params' must be an object", "params")
    unknown = sorted(set(raw) - set(_PARAM_TYPES))
    if unknown:
        raise SpecError(f"unknown analysis parameter {unknown[0]!r}", unknown[0])
    out = {}
    for key, v in raw.items():
        want = _PARAM_TYPES[key]
        try:
            if want is int:
                if isinstance(v, bool) or not isinstance(v, int):
                    raise TypeError
                out[key] = v
            elif want is float:
                if isinstance(v, bool):
                    raise TypeError
                out[key] = float(v)  # float literals arrive as their source text
            elif want is str:
                if not isinstance(v, (str, int)) or isinstance(v, bool):
                    raise TypeError
                out[key] = str(v)
            else:
                if not isinstance(v, list) or any(isinstance(c, bool) or not isinstance(c, int) for c in v):
                    raise TypeError
                out[key] = tuple(v)
        except (TypeError, ValueError):
            raise SpecError(f"parameter {key!r} has the wrong type: {v!r}", key) from None
    return AnalysisParams(**out).validate()


@dataclass(frozen=True)
class ExperimentConfig:
    analysis: str
    sequence: SequenceSpec | None = None
    params: AnalysisParams = field(default_factory=AnalysisParams)
    out: str | None = None
    format: str = "csv"
    workers: int = 1

    def validate(self) -> "ExperimentConfig":
        if self.analysis not in ANALYSES:
            raise SpecError(f"unknown analysis kind {self.analysis!r}", "analysis")
        if self.analysis != "verify" and self.sequence is None:
            raise SpecError(f"analysis {self.analysis!r} needs a 'sequence'", "sequence")
        if self.format not in FORMATS:
            raise SpecError(f"unknown output format {self.format!r}", "format")
        if not 1 <= self.workers <= 256:
            raise SpecError(f"workers must lie in [1, 256], got {self.workers}", "workers")
        self.params.validate()
        return self

    def with_overrides(self, **kw) -> "ExperimentConfig":
        top = {k: kw.pop(k) for k in ("out", "format", "workers") if kw.get(k) is not None}
        p = {k: v for k, v in kw.items() if v is not None}
        return replace(self, params=replace(self.params, **p), **top).validate()

    def to_dict(self) -> dict:
        d = {"analysis": self.analysis, "params": _params_dict(self.params),
             "format": self.format, "workers": self.workers}
        if self.sequence is not None:
            d["sequence"] = self.sequence.to_dict()
        if self.out is not None:
            d["out"] = self.out
        return d

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True, indent=2)

    def header(self) -> list[str]:
        """Provenance lines written at the top of every report."""
        p = self.params
        lines = [f"analysis={self.analysis}"]
        if self.sequence is not None:
            lines.append(f"sequence={self.sequence.to_json()}")
        lines.append(f"N={p.N} depth={p.depth} eps={p.eps!r} tau={p.tau!r} k={p.k}")
        lines.append("checkpoints=" + ",".join(str(c) for c in p.ladder()))
        return lines


def _params_dict(p: AnalysisParams) -> dict:
    d = asdict(p)
    d["checkpoints"] = list(p.checkpoints) if p.checkpoints is not None else None
    # unset optionals are omitted so that parsing restores the default
    return {k: v for k, v in d.items() if v is not None}


_TOP_KEYS = {"analysis", "sequence", "params", "out", "format", "workers"}


def config_from_dict(d) -> ExperimentConfig:
    if not isinstance(d, dict):
        raise SpecError("configuration must be an object")
    unknown = sorted(set(d) - _TOP_KEYS)
    if unknown:
        raise SpecError(f"unknown configuration key {unknown[0]!r}", unknown[0])
    if "analysis" not in d:
        raise SpecError("missing 'analysis'", "analysis")
    seq = SequenceSpec.from_dict(d["sequence"]) if d.get("sequence") is not None else None
    workers = d.get("workers", 1)
    if isinstance(workers, bool) or not isinstance(workers, int):
        raise SpecError("'workers' must be an integer", "workers")
    out = d.get("out")
    if out is not None and not isinstance(out, str):
        raise SpecError("'out' must be a path string", "out")
    return ExperimentConfig(d["analysis"], seq, _coerce_params(d.get("params", {})), out,
                            d.get("format", "csv"), workers).validate()


def parse_spec(text: str) -> ExperimentConfig:
    """Parse a configuration document; errors carry line/column or the offending key."""
    return config_from_dict(load_json(text, "configuration"))


def serialize(config: ExperimentConfig) -> str:
    return config.to_json()


__all__ = ["ANALYSES", "AnalysisParams", "DEFAULTS", "Defaults", "ExperimentConfig", "FORMATS",
           "config_from_dict", "parse_spec", "serialize"]
