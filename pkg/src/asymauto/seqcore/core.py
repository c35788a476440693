"""Finite-alphabet sequences with vectorized, deterministic evaluation."""

from __future__ import annotations

import threading
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Any, Callable, Hashable, Iterable, Sequence as Seq

import numpy as np

INDEX_MAX = 2**63 - 1
BLOCK = 1 << 18


class SequenceError(ValueError):
    """Bad parameters or symbols for a sequence construction."""


@dataclass(frozen=True)
class Alphabet:
    """Ordered distinct symbols; symbol ``symbols[c]`` has code ``c``."""

    symbols: tuple

    def __post_init__(self):
        syms = tuple(self.symbols)
        if not syms:
            raise SequenceError("alphabet must contain at least one symbol")
        if len(set(syms)) != len(syms):
            raise SequenceError(f"alphabet symbols are not distinct: {syms!r}")
        object.__setattr__(self, "symbols", syms)
        object.__setattr__(self, "_index", {s: i for i, s in enumerate(syms)})

    @classmethod
    def range(cls, m: int) -> "Alphabet":
        return cls(tuple(range(m)))

    @property
    def size(self) -> int:
        return len(self.symbols)

    def __len__(self) -> int:
        return len(self.symbols)

    def __contains__(self, s: Hashable) -> bool:
        return s in self._index

    def code(self, s: Hashable) -> int:
        try:
            return self._index[s]
        except KeyError:
            raise SequenceError(f"symbol {s!r} not in alphabet {self.symbols!r}") from None

    def symbol(self, c: int) -> Any:
        return self.symbols[c]

    def is_numeric(self) -> bool:
        return all(isinstance(s, (int, np.integer)) and not isinstance(s, bool) for s in self.symbols)


def _code_dtype(size: int):
    if size <= 256:
        return np.uint8
    if size <= 65536:
        return np.uint16
    return np.int64


def as_index(idx) -> np.ndarray:
    arr = np.asarray(idx)
    if arr.dtype == object:
        if arr.size and (min(arr.flat) < 0 or max(arr.flat) > INDEX_MAX):
            raise OverflowError("index outside the 64-bit range")
        return arr.astype(np.int64)
    if arr.size and arr.min() < 0:
        raise SequenceError("indices must be non-negative")
    return arr.astype(np.int64, copy=False)


class Sequence:
    """A lazily evaluated map ``n -> symbol`` over a finite alphabet.

    ``fn`` receives a 1-d ``int64`` index array and returns the symbol codes.
    A sequence may additionally expose ``runs(N)``: a list of
    ``(start, stop, code)`` triples covering ``[0, N)`` for sequences that are
    piecewise constant on very long intervals.
    """

    def __init__(
        self,
        alphabet: Alphabet,
        fn: Callable[[np.ndarray], np.ndarray],
        tag: str,
        params: dict | None = None,
        runs: Callable[[int], list] | None = None,
        dfao=None,
    ):
        self.alphabet = alphabet
        self._fn = fn
        self.tag = tag
        self.params = dict(params or {})
        self._runs = runs
        self.dfao = dfao
        self.dtype = _code_dtype(alphabet.size)

    def __repr__(self) -> str:
        return f"Sequence({self.tag}, |alphabet|={self.alphabet.size})"

    def codes(self, idx) -> np.ndarray:
        arr = as_index(idx)
        flat = arr.ravel()
        out = np.asarray(self._fn(flat)).astype(self.dtype, copy=False)
        return out.reshape(arr.shape)

    def codes_range(self, N: int, start: int = 0, workers: int = 1) -> np.ndarray:
        """Codes of ``a_start, ..., a_{start+N-1}``, evaluated block by block."""
        if N < 0:
            raise SequenceError("N must be non-negative")
        if start + N - 1 > INDEX_MAX:
            raise OverflowError("index outside the 64-bit range")
        out = np.empty(N, dtype=self.dtype)
        bounds = [(s, min(s + BLOCK, N)) for s in range(0, N, BLOCK)]

        def job(b):
            lo, hi = b
            out[lo:hi] = self.codes(np.arange(start + lo, start + hi, dtype=np.int64))

        if workers > 1 and len(bounds) > 1:
            with ThreadPoolExecutor(max_workers=workers) as ex:
                list(ex.map(job, bounds))
        else:
            for b in bounds:
                job(b)
        return out

    def eval(self, n: int):
        return self.alphabet.symbol(int(self.codes(np.array([n], dtype=object))[0]))

    def eval_range(self, N: int, workers: int = 1) -> list:
        c = self.codes_range(N, workers=workers)
        syms = self.alphabet.symbols
        return [syms[x] for x in c.tolist()]

    def values(self, idx) -> np.ndarray:
        """Symbol values (numeric alphabets) at the given indices."""
        table = np.asarray(self.alphabet.symbols)
        return table[self.codes(idx)]

    def has_runs(self) -> bool:
        return self._runs is not None

    def runs(self, N: int) -> list:
        if self._runs is None:
            raise SequenceError(f"{self.tag} has no run-length structure")
        return self._runs(N)


def eval_range(seq: Sequence, N: int, workers: int = 1) -> list:
    """First ``N`` symbols of ``seq``."""
    return seq.eval_range(N, workers=workers)


def constant(symbol=0, alphabet: Alphabet | None = None) -> Sequence:
    alph = alphabet or Alphabet((symbol,))
    c = alph.code(symbol)
    return Sequence(alph, lambda idx: np.full(idx.shape, c, dtype=np.int64), "constant", {"symbol": symbol})


def periodic(word: Seq, alphabet: Alphabet | None = None) -> Sequence:
    """The purely periodic sequence ``word word word ...``."""
    word = list(word)
    if not word:
        raise SequenceError("period word must be non-empty")
    alph = alphabet or Alphabet(tuple(sorted(set(word), key=repr)))
    table = np.array([alph.code(s) for s in word], dtype=np.int64)
    L = len(word)
    return Sequence(alph, lambda idx: table[idx % L], "periodic", {"word": word})


class _Growing:
    """Thread-safe lazily grown prefix table (doubling growth)."""

    def __init__(self, build: Callable[[int], np.ndarray], initial: int = 1 << 12):
        self._build = build
        self._lock = threading.Lock()
        self._table = build(initial)

    def get(self, need: int) -> np.ndarray:
        table = self._table
        if need <= table.shape[0]:
            return table
        with self._lock:
            size = self._table.shape[0]
            if need > size:
                while size < need:
                    size *= 2
                self._table = self._build(size)
            return self._table


def perturb(seq: Sequence, positions, new_symbols) -> Sequence:
    """Replace symbols on a sparse index set.

    ``positions`` is either an explicit iterable of indices or a predicate name
    (``"squares"``) / callable mapping an index array to a boolean mask.
    ``new_symbols`` is a single symbol, a callable on the old codes returning
    new codes, or the string ``"flip"`` (binary complement of codes).
    """
    alph = seq.alphabet

    if isinstance(positions, str):
        if positions != "squares":
            raise SequenceError(f"unknown position predicate {positions!r}")
        name = "squares"

        def mask_fn(idx):
            r = np.floor(np.sqrt(idx.astype(np.float64))).astype(np.int64)
            r = np.where(r * r > idx, r - 1, r)
            r = np.where((r + 1) * (r + 1) <= idx, r + 1, r)
            return r * r == idx
    elif callable(positions):
        name = getattr(positions, "__name__", "predicate")
        mask_fn = positions
    else:
        pos = np.unique(np.asarray(list(positions), dtype=np.int64))
        name = f"{pos.size} positions"

        def mask_fn(idx):
            if pos.size == 0:
                return np.zeros(idx.shape, dtype=bool)
            j = np.searchsorted(pos, idx)
            j = np.minimum(j, pos.size - 1)
            return pos[j] == idx

    if isinstance(new_symbols, str) and new_symbols == "flip":
        if alph.size != 2:
            raise SequenceError("flip needs a binary alphabet")
        repl = lambda c: 1 - c.astype(np.int64)
    elif callable(new_symbols):
        repl = new_symbols
    else:
        code = alph.code(new_symbols)
        repl = lambda c: np.full(c.shape, code, dtype=np.int64)

    def fn(idx):
        c = seq.codes(idx).astype(np.int64)
        m = mask_fn(idx)
        if m.any():
            new = np.asarray(repl(c[m]), dtype=np.int64)
            if new.size and (new.min() < 0 or new.max() >= alph.size):
                raise SequenceError("replacement symbol outside the alphabet")
            c[m] = new
        return c

    return Sequence(alph, fn, f"perturb({seq.tag}; {name})", {"base": seq.tag})
