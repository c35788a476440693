"""Declarative sequence descriptions: ``{"kind": ..., "params": {...}}``.

Real parameters travel as strings so that decimal and surd literals survive a
round trip unchanged. JSON float literals are captured by their source text
(``parse_float=str``), never through a binary float.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Callable

from ..reals import Real
from . import dfao as _dfao
from . import multiplicative as _mult
from .core import Alphabet, Sequence, constant, perturb, periodic
from .smooth import SmoothSchedule, gamma_schedule, smooth_parity_sequence
from .sturmian import bracket_floor_mod, patched_sturmian, sturmian
from .theta import theta_frequency_sequence


class SpecError(ValueError):
    """Invalid sequence or experiment description; ``key`` names the culprit."""

    def __init__(self, msg: str, key: str | None = None):
        super().__init__(msg)
        self.key = key


def load_json(text: str, what: str = "document") -> Any:
    try:
        return json.loads(text, parse_float=str)
    except json.JSONDecodeError as e:
        raise SpecError(f"{what}: {e.msg} at line {e.lineno}, column {e.colno} (char {e.pos})") from None


# parameter checkers ---------------------------------------------------------


def _int(v, key):
    if isinstance(v, bool) or not isinstance(v, int):
        raise SpecError(f"parameter {key!r} must be an integer, got {v!r}", key)
    return v


def _real(v, key):
    if isinstance(v, bool) or not isinstance(v, (int, str)):
        raise SpecError(f"parameter {key!r} must be a real given as a string or integer, got {v!r}", key)
    try:
        Real.parse(v)
    except (ValueError, TypeError, ZeroDivisionError) as e:
        raise SpecError(f"parameter {key!r}: cannot parse {v!r} as a real ({e})", key) from None
    return str(v)


def _rational(v, key):
    try:
        Fraction(str(v))
    except (ValueError, ZeroDivisionError):
        raise SpecError(f"parameter {key!r} must be a rational, got {v!r}", key) from None
    return v if isinstance(v, int) and not isinstance(v, bool) else str(v)


def _list(inner):
    def check(v, key):
        if not isinstance(v, list):
            raise SpecError(f"parameter {key!r} must be a list", key)
        return [inner(x, f"{key}[{i}]") for i, x in enumerate(v)]
    return check


def _choice(*opts):
    def check(v, key):
        if v not in opts:
            raise SpecError(f"parameter {key!r} must be one of {', '.join(map(str, opts))}; got {v!r}", key)
        return v
    return check


def _str(v, key):
    if not isinstance(v, str):
        raise SpecError(f"parameter {key!r} must be a string", key)
    return v


def _symbol(v, key):
    if isinstance(v, bool) or not isinstance(v, (int, str)):
        raise SpecError(f"parameter {key!r} must be an integer or a string symbol", key)
    return v


def _matrix_list(v, key):
    if not isinstance(v, list):
        raise SpecError(f"parameter {key!r} must be a list of matrices", key)
    return [_list(_list(_rational))(M, f"{key}[{i}]") for i, M in enumerate(v)]


def _positions(v, key):
    if v == "squares":
        return v
    return _list(_int)(v, key)


def _new_symbols(v, key):
    return v if v == "flip" else _symbol(v, key)


def _sub_spec(v, key):
    if not isinstance(v, dict):
        raise SpecError(f"parameter {key!r} must be a nested sequence description", key)
    return SequenceSpec.from_dict(v, where=key).to_dict()


_REQ = object()


@dataclass(frozen=True)
class _Kind:
    params: dict  # name -> (checker, default or _REQ)
    build: Callable[[dict], Any]
    numeric: bool = False


def _linrep_build(p):
    from ..regular import linrep as lr

    if p.get("builtin") is not None:
        if any(p.get(x) is not None for x in ("lambda", "matrices", "gamma")):
            raise SpecError("give either 'builtin' or explicit lambda/matrices/gamma", "builtin")
        maker = {"digit_sum": lr.digit_sum_rep, "identity": lr.identity_rep,
                 "last_digit": lr.last_digit_rep, "square": lr.square_rep}[p["builtin"]]
        rep = maker(p["k"])
    else:
        missing = [x for x in ("lambda", "matrices", "gamma") if p.get(x) is None]
        if missing:
            raise SpecError(f"explicit representation needs {missing[0]!r}", missing[0])
        try:
            rep = lr.LinearRepresentation.from_dict(
                {"lambda": p["lambda"], "matrices": p["matrices"], "gamma": p["gamma"], "field": "Q"})
        except ValueError as e:
            raise SpecError(f"representation: {e}", "matrices") from None
    num = lr.as_numeric(rep)
    num.rep = rep
    return num


def _residue_poly_build(p):
    from ..regular.linrep import NumericSequence
    import numpy as np

    coeffs = [[Fraction(str(c)) for c in row] for row in p["coefficients"]]
    if not coeffs or any(not row for row in coeffs):
        raise SpecError("each residue class needs at least one coefficient", "coefficients")
    m = len(coeffs)

    def fn(idx):
        out = np.empty(idx.size, dtype=object)
        for t, n in enumerate(idx.tolist()):
            acc = Fraction(0)
            for c in reversed(coeffs[n % m]):
                acc = acc * n + c
            out[t] = int(acc) if acc.denominator == 1 else acc
        return out

    return NumericSequence(fn, "residue_polynomial", {"coefficients": p["coefficients"]})


def _fast_growth_build(p):
    from ..regular.growth import fast_growth_sequence, max_patch

    e = p["exponent"]
    if e < 0:
        raise SpecError("exponent must be non-negative", "exponent")
    f = lambda n: n**e  # noqa: E731
    a = fast_growth_sequence(f=f)
    return max_patch(a, f) if p["patched"] else a


def _dfao_build(p):
    if p.get("name") is not None:
        if any(p.get(x) is not None for x in ("delta", "tau")):
            raise SpecError("give either 'name' or an explicit delta/tau table", "name")
        return _dfao.dfao_sequence(_dfao.BUILTIN_DFAOS[p["name"]]())
    if p.get("delta") is None or p.get("tau") is None:
        raise SpecError("explicit automaton needs 'delta' and 'tau'", "delta" if p.get("delta") is None else "tau")
    symbols = p.get("symbols")
    tau = p["tau"]
    syms = tuple(symbols) if symbols is not None else tuple(range(max(tau) + 1 if tau else 1))
    try:
        m = _dfao.DFAO(p["k"], tuple(tuple(r) for r in p["delta"]), p["q0"], tuple(tau), Alphabet(syms), "custom")
    except ValueError as e:
        raise SpecError(f"automaton: {e}", "delta") from None
    return _dfao.dfao_sequence(m)


def _smooth_build(p):
    if (p.get("gamma") is None) == (p.get("j_max") is None):
        raise SpecError("give exactly one of 'gamma' and 'j_max'", "gamma")
    if p.get("gamma") is not None:
        try:
            sched = SmoothSchedule(tuple(p["gamma"]))
        except ValueError as e:
            raise SpecError(f"gamma: {e}", "gamma") from None
    else:
        sched = gamma_schedule(p["j_max"])
    s = smooth_parity_sequence(sched)
    s.schedule = sched
    return s


def _perturb_build(p):
    base = SequenceSpec.from_dict(p["base"], where="base").build()
    return perturb(base, p["positions"], p["symbol"])


def _wrap(kind: str, fn):
    """Turn domain errors raised by a generator into spec errors."""
    def build(p):
        try:
            return fn(p)
        except SpecError:
            raise
        except (ValueError, TypeError) as e:
            raise SpecError(f"{kind}: {e}", "params") from None
    return build


KINDS: dict[str, _Kind] = {
    "constant": _Kind({"symbol": (_symbol, 0)}, lambda p: constant(p["symbol"])),
    "periodic": _Kind({"word": (_list(_symbol), _REQ)}, lambda p: periodic(p["word"])),
    "thue_morse": _Kind({}, lambda p: _dfao.thue_morse()),
    "period_doubling": _Kind({}, lambda p: _dfao.period_doubling()),
    "rudin_shapiro": _Kind({}, lambda p: _dfao.rudin_shapiro()),
    "dfao": _Kind({"name": (_choice(*_dfao.BUILTIN_DFAOS), None), "k": (_int, 2),
                   "delta": (_list(_list(_int)), None), "q0": (_int, 0), "tau": (_list(_int), None),
                   "symbols": (_list(_symbol), None)}, _dfao_build),
    "sturmian": _Kind({"theta": (_real, _REQ), "rho": (_real, "0"), "mode": (_choice("floor", "ceil"), "floor")},
                      lambda p: sturmian(p["theta"], p["rho"], p["mode"])),
    "patched_sturmian": _Kind({"theta": (_real, _REQ), "rho_list": (_list(_real), _REQ),
                               "block_lengths": (_list(_int), _REQ), "mode": (_choice("floor", "ceil"), "floor")},
                              lambda p: patched_sturmian(p["theta"], p["rho_list"], p["block_lengths"], p["mode"])),
    "bracket_floor_mod": _Kind({"alpha": (_real, _REQ), "beta": (_real, "0"), "m": (_int, 2)},
                               lambda p: bracket_floor_mod(p["alpha"], p["beta"], p["m"])),
    "theta_frequency": _Kind({"theta": (_real, _REQ), "selector": (_choice("canonical", "terminal"), "canonical")},
                             lambda p: theta_frequency_sequence(p["theta"], p["selector"])),
    "smooth_parity": _Kind({"gamma": (_list(_int), None), "j_max": (_int, None)}, _smooth_build),
    "mobius": _Kind({}, lambda p: _mult.mobius()),
    "liouville": _Kind({}, lambda p: _mult.liouville()),
    "dirichlet_character": _Kind({"q": (_int, _REQ), "index": (_int, 0)},
                                 lambda p: _mult.dirichlet_character(p["q"], p["index"])),
    "klm_form": _Kind({"p": (_int, _REQ), "b": (_list(_int), _REQ), "c": (_list(_int), _REQ),
                       "c_period": (_int, 1)},
                      lambda p: _mult.klm_form(p["p"], p["b"], p["c"], p["c_period"])),
    "perturb": _Kind({"base": (_sub_spec, _REQ), "positions": (_positions, _REQ),
                      "symbol": (_new_symbols, "flip")}, _perturb_build),
    "linrep": _Kind({"builtin": (_choice("digit_sum", "identity", "last_digit", "square"), None),
                     "k": (_int, 2), "lambda": (_list(_rational), None), "matrices": (_matrix_list, None),
                     "gamma": (_list(_rational), None)}, _linrep_build, numeric=True),
    "residue_polynomial": _Kind({"coefficients": (_list(_list(_rational)), _REQ)}, _residue_poly_build,
                                numeric=True),
    "fast_growth": _Kind({"exponent": (_int, 2), "patched": (_choice(True, False), False)}, _fast_growth_build,
                         numeric=True),
}


@dataclass(frozen=True)
class SequenceSpec:
    kind: str
    params: dict = field(default_factory=dict)

    @classmethod
    def from_dict(cls, d, where: str = "sequence") -> "SequenceSpec":
        if not isinstance(d, dict):
            raise SpecError(f"{where}: expected an object with 'kind' and 'params'", where)
        extra = sorted(set(d) - {"kind", "params"})
        if extra:
            raise SpecError(f"{where}: unknown key {extra[0]!r}", extra[0])
        kind = d.get("kind")
        if kind not in KINDS:
            raise SpecError(f"{where}: unknown sequence kind {kind!r}", "kind")
        raw = d.get("params", {})
        if not isinstance(raw, dict):
            raise SpecError(f"{where}: 'params' must be an object", "params")
        schema = KINDS[kind].params
        unknown = sorted(set(raw) - set(schema))
        if unknown:
            raise SpecError(f"{where}: unknown parameter {unknown[0]!r} for kind {kind!r}", unknown[0])
        params = {}
        for name, (check, default) in schema.items():
            if name in raw:
                params[name] = check(raw[name], name) if raw[name] is not None else None
            elif default is _REQ:
                raise SpecError(f"{where}: missing parameter {name!r} for kind {kind!r}", name)
            elif default is not None:
                params[name] = default
        return cls(kind, params)

    @classmethod
    def parse(cls, text: str) -> "SequenceSpec":
        return cls.from_dict(load_json(text, "sequence"))

    def to_dict(self) -> dict:
        return {"kind": self.kind, "params": dict(self.params)}

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True)

    @property
    def numeric(self) -> bool:
        return KINDS[self.kind].numeric

    def build(self):
        p = {name: self.params.get(name) for name in KINDS[self.kind].params}
        return _wrap(self.kind, KINDS[self.kind].build)(p)


def parse_sequence_spec(text: str) -> SequenceSpec:
    return SequenceSpec.parse(text)


def serialize_sequence_spec(spec: SequenceSpec) -> str:
    return spec.to_json()
