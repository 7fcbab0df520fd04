"""Finite Hales-Jewett search over located words."""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Callable, Hashable

import numpy as np

from . import kernels
from ._parallel import first_hit, split_range
from .coloring import Coloring
from .core import Alphabet, LocatedVariableWord, Window, star_encoding, variable_words_in_window
from .errors import BudgetExhausted, ExceedsBound


@dataclass(frozen=True)
class HJWitness:
    """A variable word all of whose letter instantiations share ``color``."""

    p: LocatedVariableWord
    color: Hashable
    window: Window


@lru_cache(maxsize=32)
def _candidates(letters: tuple[str, ...], n: int):
    alphabet = Alphabet(letters)
    words = variable_words_in_window(alphabet, n)
    enc = np.array([star_encoding(w, alphabet) for w in words], dtype=np.int64).reshape(-1, 2)
    fixed = np.ascontiguousarray(enc[:, 0])
    star = np.ascontiguousarray(enc[:, 1])
    fixed.setflags(write=False)
    star.setflags(write=False)
    return words, fixed, star


def candidates(alphabet: Alphabet, n: int):
    """Variable words of the window ``[0, n)`` in canonical order with their ``(fixed, star)`` arrays."""
    return _candidates(alphabet.letters, n)


def hj_witness(f: Coloring, window: int | None = None,
               accept: Callable[[Hashable], bool] | None = None) -> HJWitness | None:
    """Least variable word (canonical order) inside the window with a monochromatic instantiation set.

    ``accept`` filters the common color (decoded through the palette); words
    whose common color is rejected are skipped.  Returns ``None`` when the
    window holds no witness.
    """
    n = f.window if window is None else window
    table = f.table_upto(n)
    words, fixed, star = candidates(f.alphabet, n)
    if accept is None:
        allowed = np.ones(f.n_colors, dtype=np.bool_)
    else:
        allowed = np.array([bool(accept(f.decode(c))) for c in range(f.n_colors)], dtype=np.bool_)
    j = kernels.hj_first(table, fixed, star, f.k, allowed)
    if j < 0:
        return None
    p = words[j]
    return HJWitness(p, f.value(p.instantiate(f.alphabet.letters[0])), Window(n))


def hj_counterexample(k: int, c: int, n: int, threads: int | None = None,
                      limit: int = 1 << 32) -> int | None:
    """Index of the first ``c``-coloring of the window ``[0, n)`` without a witness, or ``None``.

    Coloring index ``ci`` assigns the word with table index ``t >= 1`` the
    color ``(ci // c**(t-1)) % c``.
    """
    size = (k + 1) ** n
    total = c ** (size - 1)
    if total > limit:
        raise BudgetExhausted(f"{total} colorings exceed the enumeration limit {limit}")
    _, fixed, star = candidates(Alphabet([chr(ord("a") + i) for i in range(k)]), n)
    if fixed.size == 0:
        return 0
    fn = kernels.get("hj_scan")

    def run(r):
        hit = fn(r[0], r[1], c, size, k, fixed, star)
        return None if hit < 0 else int(hit)

    n_chunks = 1 if total < 4096 else min(256, total // 1024)
    return first_hit(run, split_range(0, total, n_chunks), threads)


def coloring_from_index(k: int, c: int, n: int, ci: int) -> Coloring:
    size = (k + 1) ** n
    table = [0] + [(ci // c ** (t - 1)) % c for t in range(1, size)]
    return Coloring(Alphabet([chr(ord("a") + i) for i in range(k)]), c, table)


def hj_number(k: int, c: int, n_max: int, threads: int | None = None, limit: int = 1 << 32) -> int:
    """Least window size ``N <= n_max`` in which every ``c``-coloring has a witness."""
    if k < 1 or c < 1:
        raise ValueError("need k >= 1 and c >= 1")
    for n in range(1, n_max + 1):
        if hj_counterexample(k, c, n, threads, limit) is None:
            return n
    raise ExceedsBound(f"no window up to {n_max} works for k={k}, c={c}")
