"""Naive reference enumerators.

Written against the definitions only, with plain dicts for words and no
imports from the package, so that agreement with the package is evidence
rather than a tautology.  Everything here is exponential and meant for tiny
windows.
"""

from __future__ import annotations

import itertools
from typing import Callable, Iterable, Sequence

STAR = "*"

Word = dict  # position -> symbol


def key(w: Word) -> tuple:
    return tuple(sorted(w.items()))


def index_of(w: Word, letters: str) -> int:
    base = len(letters) + 1
    return sum((1 + letters.index(s)) * base**pos for pos, s in w.items())


def all_words(letters: str, lo: int, hi: int, with_star: bool = False) -> list[Word]:
    """Every word (empty included) inside ``[lo, hi)``; with ``with_star`` the symbols include the variable."""
    symbols = [None] + list(letters) + ([STAR] if with_star else [])
    out = []
    for choice in itertools.product(symbols, repeat=hi - lo):
        out.append({lo + i: s for i, s in enumerate(choice) if s is not None})
    return out


def variable_words(letters: str, n: int) -> list[Word]:
    return [w for w in all_words(letters, 0, n, True) if STAR in w.values()]


def inst(p: Word, a: str) -> Word:
    return {i: (a if s == STAR else s) for i, s in p.items()}


def join(*ws: Word) -> Word:
    out: dict = {}
    for w in ws:
        assert not set(out) & set(w)
        out.update(w)
    return out


def colour(table: Sequence[int], letters: str) -> Callable[[Word], int]:
    return lambda w: table[index_of(w, letters)]


# ---------------------------------------------------------------------------
# Hales-Jewett
# ---------------------------------------------------------------------------

def has_line(col: Callable[[Word], int], letters: str, n: int) -> Word | None:
    for p in variable_words(letters, n):
        if len({col(inst(p, a)) for a in letters}) == 1:
            return p
    return None


def hj_number(k: int, c: int, n_max: int, limit: int = 1 << 20) -> int | None:
    """Least window in which every c-coloring of the nonempty words has a monochromatic line."""
    letters = "abcdefgh"[:k]
    for n in range(1, n_max + 1):
        words = [w for w in all_words(letters, 0, n) if w]
        if c ** len(words) > limit:
            raise RuntimeError("too many colorings for the oracle")
        lines = []
        for p in variable_words(letters, n):
            lines.append([words.index(inst(p, a)) for a in letters])
        ok = True
        for assignment in itertools.product(range(c), repeat=len(words)):
            if not any(len({assignment[i] for i in ln}) == 1 for ln in lines):
                ok = False
                break
        if ok:
            return n
    return None


# ---------------------------------------------------------------------------
# Spans and quantifiers
# ---------------------------------------------------------------------------

def span(blocks: Sequence[Word], letters: str, arity: int | None = None, star: bool = False) -> list[Word]:
    """All unions of instantiated blocks; with ``star`` the variable may be kept (and must survive)."""
    symbols = list(letters) + ([STAR] if star else [])
    r = len(blocks) if arity is None else min(arity, len(blocks))
    seen = {}
    for size in range(1, r + 1):
        for chosen in itertools.combinations(blocks, size):
            for assign in itertools.product(symbols, repeat=size):
                w = join(*(inst(b, a) for b, a in zip(chosen, assign)))
                if star and STAR not in w.values():
                    continue
                seen[key(w)] = w
    return list(seen.values())


def weakly_thin(col, Y, i, letters) -> bool:
    return all(any(col(inst(p, a)) != i for a in letters) for p in span(Y, letters, star=True))


def thin(col, Y, i, letters) -> bool:
    return all(col(p) != i for p in span(Y, letters))


def match_holds(col, kind: str, F, Y, color, letters, arity=None) -> bool:
    for q in span(Y, letters, arity):
        fq = col(q)
        if kind == "half" and fq != color:
            continue
        good = False
        for p in F:
            ps = [inst(p, a) for a in letters]
            if kind == "full" and any(col(x) != fq for x in ps):
                continue
            if all(col(join(x, q)) == fq for x in ps):
                good = True
                break
        if not good:
            return False
    return True


def monochromatic(col, words: Iterable[Word]) -> bool:
    return len({col(w) for w in words}) <= 1


def carlson_min_window(col_for_window: Callable[[int], Callable], letters: str, m: int, n_max: int) -> int | None:
    """Least ``N`` with ``m`` increasing variable words inside ``[0, N)`` whose span is monochromatic."""
    for n in range(1, n_max + 1):
        col = col_for_window(n)
        vws = variable_words(letters, n)

        def rec(chosen, last):
            if len(chosen) == m:
                return monochromatic(col, span(chosen, letters))
            for p in vws:
                if min(p) > last and rec(chosen + [p], max(p)):
                    return True
            return False

        if rec([], -1):
            return n
    return None


# ---------------------------------------------------------------------------
# Naturals and finite sets
# ---------------------------------------------------------------------------

def bits(n: int) -> set[int]:
    return {i for i, ch in enumerate(reversed(bin(n)[2:])) if ch == "1"}


def two_apart(seq: Sequence[int]) -> bool:
    return all(max(bits(x)) < min(bits(y)) for x, y in zip(seq, seq[1:]))


def finite_sums(ys: Sequence[int], arity: int | None = None) -> set[int]:
    r = len(ys) if arity is None else arity
    return {sum(c) for size in range(1, r + 1) for c in itertools.combinations(ys, size)}


# ---------------------------------------------------------------------------
# Shifts
# ---------------------------------------------------------------------------

def factor(col, letters: str, ell: int, p: Word) -> tuple:
    """Colors of ``q | p`` for ``q`` inside ``[0, ell)``, listed by index of ``q``."""
    qs = sorted(all_words(letters, 0, ell), key=lambda w: index_of(w, letters))
    return tuple(col(join(q, p)) for q in qs)


def words_past(letters: str, ell: int, bound: int, star: bool = False) -> list[Word]:
    ws = [w for w in all_words(letters, ell, bound, star) if w]
    if star:
        ws = [w for w in ws if STAR in w.values()]
    return ws
