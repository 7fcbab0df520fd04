"""Thinness, half/full matches, and bounded Carlson and finite-union searches.

Colorings here are any callables from located words to hashable colors, so
tuple-valued (product) colorings built during the constructions plug in
directly.  Every "infinite block sequence" conclusion is finitized: searches
return finite prefixes or raise ``Exhausted``.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from functools import lru_cache
from typing import Callable, Hashable, Iterable, Sequence

import numpy as np

from . import kernels
from ._parallel import first_hit, split_range
from .coloring import Coloring
from .core import EMPTY, Alphabet, LocatedVariableWord, Window, union
from .errors import Exhausted, NotWeaklyThin, VerificationFailed
from .hj import candidates, hj_witness
from .spans import (
    MODE_A,
    MODE_ASTAR,
    BlockSequence,
    FinSetSequence,
    finite_unions,
    iter_span,
    span_located,
)
from .transport import iota_located

ColorFn = Callable[[object], Hashable]


def _alphabet(f, alphabet: Alphabet | None) -> Alphabet:
    if alphabet is not None:
        return alphabet
    try:
        return f.alphabet
    except AttributeError:
        raise TypeError("pass an alphabet for plain-function colorings") from None


def _blocks(X) -> BlockSequence:
    return X if isinstance(X, BlockSequence) else BlockSequence(X)


@dataclass(frozen=True)
class Check:
    """Outcome of a bounded universal check; falsy with a counterexample on failure."""

    ok: bool
    counterexample: object = None
    checked: int = 0

    def __bool__(self) -> bool:
        return self.ok


# ---------------------------------------------------------------------------
# Thinness
# ---------------------------------------------------------------------------

def is_weakly_thin(f: ColorFn, Y, i: Hashable, alphabet: Alphabet | None = None) -> Check:
    """Every ``p`` in ``[Y]_{A*}`` has a letter ``a`` with ``f(p[a]) != i``."""
    A = _alphabet(f, alphabet)
    n = 0
    for p in iter_span(_blocks(Y), A, MODE_ASTAR):
        n += 1
        if all(f(p.instantiate(a)) == i for a in A.letters):
            return Check(False, p, n)
    return Check(True, None, n)


def is_thin(f: ColorFn, Y, i: Hashable, alphabet: Alphabet | None = None) -> Check:
    """No ``p`` in ``[Y]_A`` has color ``i``."""
    A = _alphabet(f, alphabet)
    n = 0
    for p in iter_span(_blocks(Y), A, MODE_A):
        n += 1
        if f(p) == i:
            return Check(False, p, n)
    return Check(True, None, n)


def _index_coloring(values: Callable[[object], Hashable], A: Alphabet, n: int) -> Coloring:
    return Coloring.from_function(A, values, n, extend=False)


def thin_refine(f: ColorFn, X, i: Hashable, target_len: int, alphabet: Alphabet | None = None,
                strict: bool = True, max_index_window: int = 6) -> BlockSequence:
    """A block sequence in ``[X]_{A*}`` of ``target_len`` members that is thin for ``i``.

    Built block by block: the next member is the least variable word (over
    the remaining tail, in index coordinates) whose instantiations agree
    on the tuple ``(f(s | q[a]) : s in [chosen]_A + {empty})``.  With
    ``strict`` the input must be weakly thin for ``i`` (checked first), which
    forces the common colors to avoid ``i``; otherwise the search simply
    skips tuples containing ``i``.
    """
    A = _alphabet(f, alphabet)
    X = _blocks(X)
    if strict:
        chk = is_weakly_thin(f, X, i, A)
        if not chk:
            raise NotWeaklyThin(f"{chk.counterexample.render()} has every instantiation colored {i!r}")
    out: list[LocatedVariableWord] = []
    rest = X
    while len(out) < target_len:
        prefix = [EMPTY] + span_located(out, A, MODE_A)
        found = None
        for n in range(1, min(len(rest), max_index_window) + 1):
            blocks = rest.items[:n]

            def g(q, blocks=blocks):
                w = iota_located(blocks, q)
                return tuple(f(union(s, w)) for s in prefix)

            accept = None if strict else (lambda color: i not in color)
            wit = hj_witness(_index_coloring(g, A, n), n, accept)
            if wit is not None:
                found = iota_located(blocks, wit.p)
                break
        if found is None:
            raise Exhausted(f"no thin extension after {len(out)} blocks")
        out.append(found)
        rest = rest.after(found.max_pos)
    Y = BlockSequence(out)
    if not is_thin(f, Y, i, A):  # pragma: no cover - guaranteed by construction
        raise VerificationFailed("refined sequence is not thin")
    return Y


# ---------------------------------------------------------------------------
# Matches
# ---------------------------------------------------------------------------

HALF = "half"
HALF_ALL = "half_all"
FULL = "full"


@dataclass(frozen=True)
class MatchStructure:
    """A finite absorber ``F`` for the span of ``Y`` (``kind`` half / half_all / full)."""

    F: tuple[LocatedVariableWord, ...]
    Y: BlockSequence
    kind: str
    color: Hashable = None
    window: Window | None = None

    def __post_init__(self):
        if self.kind not in (HALF, HALF_ALL, FULL):
            raise ValueError(f"unknown match kind {self.kind!r}")
        if self.kind == HALF and self.color is None:
            raise ValueError("a half match needs a color")
        for p in self.F:
            if not isinstance(p, LocatedVariableWord):
                raise TypeError("F holds located variable words")
        if self.F and len(self.Y):
            if max(p.max_pos for p in self.F) >= self.Y[0].min_pos:
                raise ValueError("every member of F must precede Y")


@dataclass(frozen=True)
class ThinReduction:
    """A color ``i`` and a block sequence ``Y`` that is thin for ``i``."""

    color: Hashable
    Y: BlockSequence


def _window_of(*groups: Iterable) -> Window:
    top = -1
    for g in groups:
        for w in g:
            top = max(top, w.max_pos)
    return Window(top + 1)


def check_match(f: ColorFn, m: MatchStructure, alphabet: Alphabet | None = None,
                arity: int | None = None) -> Check:
    """Evaluate the defining universal of ``m`` over ``[Y]_A`` (optionally arity-bounded)."""
    A = _alphabet(f, alphabet)
    n = 0
    for q in iter_span(m.Y, A, MODE_A, arity):
        n += 1
        fq = f(q)
        if m.kind == HALF:
            if fq != m.color:
                continue
            ok = any(all(f(union(p.instantiate(a), q)) == fq for a in A.letters) for p in m.F)
        elif m.kind == HALF_ALL:
            ok = any(all(f(union(p.instantiate(a), q)) == fq for a in A.letters) for p in m.F)
        else:
            ok = any(all(f(p.instantiate(a)) == fq and f(union(p.instantiate(a), q)) == fq
                         for a in A.letters) for p in m.F)
        if not ok:
            return Check(False, q, n)
    return Check(True, None, n)


def _second_case(f, F_span, Y, i, A) -> bool:
    for u in iter_span(Y, A, MODE_A):
        if not any(all(f(union(p.instantiate(b), u)) == i for b in A.letters) for p in F_span):
            return False
    return True


def _greedy_avoiders(f, X: BlockSequence, i, A: Alphabet, count: int):
    """Increasing ``p_0 < p_1 < ...`` in ``[X]_{A*}`` with letters ``a_n`` such that
    every ``p`` in the span of the earlier words has some ``b`` with ``f(p[b] | p_n[a_n]) != i``."""
    ps: list[LocatedVariableWord] = []
    letters: list[str] = []
    rest = X
    while len(ps) < count and len(rest):
        earlier = span_located(ps, A, MODE_ASTAR)
        pick = None
        for cand in iter_span(rest, A, MODE_ASTAR):
            for a in A.letters:
                tail = cand.instantiate(a)
                if all(any(f(union(p.instantiate(b), tail)) != i for b in A.letters) for p in earlier):
                    pick = (cand, a)
                    break
            if pick:
                break
        if pick is None:
            break
        ps.append(pick[0])
        letters.append(pick[1])
        rest = rest.after(pick[0].max_pos)
    return ps, letters


def find_half_match(f: ColorFn, X, i: Hashable, alphabet: Alphabet | None = None,
                    min_tail: int = 2, slack: int = 1, max_index_window: int = 6) -> MatchStructure:
    """A finite ``F`` half-matching a tail ``Y`` for color ``i``.

    First looks for a prefix ``X[:j]`` whose variable span absorbs every
    element of ``[X[j:]]_A`` into color ``i``.  Failing that, pairs greedy
    avoiders into a weakly thin sequence, refines it to a thin one ``Z`` and
    returns ``F = [Z[0]]``, ``Y = Z[1:]`` (the match is then vacuous).
    """
    A = _alphabet(f, alphabet)
    X = _blocks(X)
    for j in range(1, len(X) - min_tail + 1):
        F_span = span_located(X[:j], A, MODE_ASTAR)
        Y = X[j:]
        if _second_case(f, F_span, Y, i, A):
            return MatchStructure(tuple(F_span), Y, HALF, i, _window_of(F_span, Y))
    target = 1 + min_tail
    ps, letters = _greedy_avoiders(f, X, i, A, 2 * (target + slack))
    pairs = [union(ps[2 * n], ps[2 * n + 1].instantiate(letters[2 * n + 1])) for n in range(len(ps) // 2)]
    if len(pairs) < target:
        raise Exhausted(f"only {len(pairs)} paired blocks available, {target} needed")
    Y = BlockSequence(pairs)
    if not is_weakly_thin(f, Y, i, A):  # pragma: no cover - guaranteed by the pairing
        raise VerificationFailed("paired sequence is not weakly thin")
    Z = thin_refine(f, Y, i, target, A, strict=True, max_index_window=max_index_window)
    return MatchStructure((Z[0],), Z[1:], HALF, i, _window_of(Z))


def _colors_on(f, Y, A) -> list:
    seen: dict = {}
    for q in iter_span(Y, A, MODE_A):
        seen.setdefault(f(q), None)
    return list(seen)


def find_half_match_all(f: ColorFn, X, alphabet: Alphabet | None = None, min_tail: int = 2,
                        slack: int = 1, max_index_window: int = 6) -> MatchStructure:
    """Half matches for every color, one after another on shrinking tails."""
    A = _alphabet(f, alphabet)
    Y = _blocks(X)
    F: list[LocatedVariableWord] = []
    done: set = set()
    while True:
        todo = [c for c in _colors_on(f, Y, A) if c not in done]
        if not todo:
            break
        i = todo[0]
        m = find_half_match(f, Y, i, A, min_tail, slack, max_index_window)
        F.extend(m.F)
        Y = m.Y
        done.add(i)
    return MatchStructure(tuple(F), Y, HALF_ALL, None, _window_of(F, Y))


def _absorber(f, F: Sequence[LocatedVariableWord], q, A):
    fq = f(q)
    for p in F:
        if all(f(union(p.instantiate(a), q)) == fq for a in A.letters):
            return p
    return None


def _chains(Fs: Sequence[Sequence[LocatedVariableWord]], A: Alphabet) -> list:
    """Union over choices ``p_t in F_t`` of ``[p_1, ..., p_s]_{A*}``, canonical order, no repeats."""
    from itertools import product

    from .core import sort_key

    out = {}
    for choice in product(*Fs):
        for p in iter_span(choice, A, MODE_ASTAR):
            out.setdefault(p, None)
    return sorted(out, key=lambda w: sort_key(w, A))


def full_match_case(f: ColorFn, X, alphabet: Alphabet | None = None, rounds: int = 1,
                    min_tail: int = 2, target_len: int = 3, max_index_window: int = 6):
    """One application of the full-match dichotomy: a full match or a thin reduction.

    Runs ``rounds`` half-match-all stages with product colorings
    ``f_{s+1}(q) = (least absorbing p, f_s(q))``.  If some stage's chain span
    full-matches the current tail, that structure is returned.  Otherwise the
    most frequent failing color ``i`` is taken, the absorbing chain recorded
    in the product color of a failing ``q`` seeds a weakly thin sequence, and
    its thin refinement is returned as a ``ThinReduction``.
    """
    A = _alphabet(f, alphabet)
    Y = _blocks(X)
    fs: list = [f]
    Fs: list[tuple] = []
    failures: list = []
    for s in range(rounds):
        fcur = fs[-1]
        m = find_half_match_all(fcur, Y, A, min_tail, 1, max_index_window)
        Fs.append(m.F)
        Y = m.Y

        def nxt(q, fcur=fcur, Fn=m.F):
            p = _absorber(fcur, Fn, q, A)
            return (p, fcur(q))

        fs.append(nxt)
        F_all = _chains(Fs, A)
        cand = MatchStructure(tuple(F_all), Y, FULL, None, _window_of(F_all, Y))
        chk = check_match(f, cand, A)
        if chk:
            return cand
        failures.append((s, chk.counterexample))
    counts = Counter(f(q) for _, q in failures)
    i = max(counts, key=lambda c: (counts[c], -[f(q) for _, q in failures].index(c)))
    s, q = [(s, q) for s, q in failures if f(q) == i][-1]
    chain = []
    value = fs[s + 1](q)
    while isinstance(value, tuple):
        p, value = value
        if p is not None:
            chain.append(p)
    chain.reverse()
    seed = BlockSequence(chain)
    if not is_weakly_thin(f, seed, i, A):
        raise Exhausted("recorded chain is not weakly thin")
    seed = _extend_weakly_thin(f, seed, Y, i, A, target_len)
    Z = thin_refine(f, seed, i, min(target_len, len(seed)), A, strict=True, max_index_window=max_index_window)
    return ThinReduction(i, Z)


def _extend_weakly_thin(f, seed: BlockSequence, pool: BlockSequence, i, A, target_len: int,
                        max_arity: int = 2) -> BlockSequence:
    items = list(seed)
    rest = pool.after(items[-1].max_pos) if items else pool
    while len(items) < target_len and len(rest):
        pick = None
        for cand in iter_span(rest, A, MODE_ASTAR, max_arity):
            if is_weakly_thin(f, items + [cand], i, A):
                pick = cand
                break
        if pick is None:
            break
        items.append(pick)
        rest = rest.after(pick.max_pos)
    return BlockSequence(items)


def find_full_match(f: ColorFn, X, alphabet: Alphabet | None = None, rounds: int = 1,
                    min_tail: int = 2, target_len: int = 3, max_index_window: int = 6) -> MatchStructure:
    """Full match by induction on the number of colors present on the span.

    With one color, ``F = [X[0]]`` full-matches ``X[1:]``.  Otherwise a
    thin reduction removes a color and the search recurses on the thin
    sequence.
    """
    A = _alphabet(f, alphabet)
    X = _blocks(X)
    if len(X) == 0:
        raise Exhausted("empty block sequence")
    colors = _colors_on(f, X, A)
    if len(colors) <= 1:
        return MatchStructure((X[0],), X[1:], FULL, None, _window_of(X))
    r = full_match_case(f, X, A, rounds, min_tail, target_len, max_index_window)
    if isinstance(r, MatchStructure):
        return r
    return find_full_match(f, r.Y, A, rounds, min_tail, target_len, max_index_window)


# ---------------------------------------------------------------------------
# Desk-scale Carlson search
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class CarlsonCertificate:
    """A block sequence whose (arity-bounded) span is monochromatic with ``color``."""

    coloring_id: str
    X: BlockSequence
    color: Hashable
    arity: int | None
    window: Window


@lru_cache(maxsize=32)
def _bounds(letters: tuple[str, ...], n: int):
    words, _, _ = candidates(Alphabet(letters), n)
    cmin = np.array([w.min_pos for w in words], dtype=np.int64)
    cmax = np.array([w.max_pos for w in words], dtype=np.int64)
    return cmin, cmax


def _span_is_mono(f: Coloring, X, arity) -> bool:
    # Direct re-evaluation by enumeration; deliberately not the kernel.
    colors = {f(w) for w in iter_span(X, f.alphabet, MODE_A, arity)}
    return len(colors) == 1


def carlson_search(f: Coloring, m: int, arity: int | None = None, window: int | None = None,
                   threads: int | None = None, chunks: int = 64) -> CarlsonCertificate:
    """Lexicographically least ``m``-block sequence in ``[0, N)`` with a monochromatic span.

    Candidate blocks are tried in canonical order; the search splits over
    disjoint ranges of first blocks and keeps the earliest range that
    succeeds, so the answer does not depend on ``threads``.
    """
    n = f.window if window is None else window
    if m < 1:
        raise ValueError("need at least one block")
    table = np.ascontiguousarray(f.table_upto(n))
    words, fixed, star = candidates(f.alphabet, n)
    cmin, cmax = _bounds(f.alphabet.letters, n)
    ar = -1 if arity is None else int(arity)
    dfs = kernels.get("carlson_dfs")

    def run(r):
        got = dfs(table, f.k, m, ar, fixed, star, cmin, cmax, n - 1, r[0], r[1])
        return None if got[0] < 0 else [int(x) for x in got]

    choice = first_hit(run, split_range(0, len(words), chunks), threads) if len(words) else None
    if choice is None:
        raise Exhausted(f"no {m}-block sequence with a monochromatic span inside [0, {n})")
    X = BlockSequence(words[j] for j in choice)
    if not _span_is_mono(f, X, arity):  # pragma: no cover - kernel bug guard
        raise VerificationFailed("kernel returned a non-homogeneous sequence")
    color = f(X[0].instantiate(f.alphabet.letters[0]))
    return CarlsonCertificate(f.content_hash(), X, color, arity, Window(n, arity))


def carlson_search_growing(f: Coloring, m: int, arity: int | None = None, start: int | None = None,
                           cap: int = 8, step: int = 2, threads: int | None = None) -> CarlsonCertificate:
    """Retry ``carlson_search`` with the window growing by ``step`` up to ``cap``."""
    n = start if start is not None else m
    last: Exhausted | None = None
    while n <= cap:
        try:
            return carlson_search(f, m, arity, n, threads)
        except Exhausted as exc:
            last = exc
        n += step
    raise Exhausted(f"no certificate up to window {cap}") from last


# ---------------------------------------------------------------------------
# Finite unions
# ---------------------------------------------------------------------------

def _binary(s: frozenset) -> int:
    return sum(1 << i for i in s)


def _fu_dfs(cands, m, arity, accept_partial, accept_full):
    """Depth-first search for ``m`` increasing candidates; spans kept incrementally."""
    chosen: list[frozenset] = []

    def rec(start_max):
        if len(chosen) == m:
            return accept_full(chosen)
        for c in cands:
            if min(c) <= start_max:
                continue
            chosen.append(c)
            if accept_partial(chosen) and rec(max(c)):
                return True
            chosen.pop()
        return False

    return list(chosen) if rec(-1) else None


def _fu_mono(g, Y, arity) -> bool:
    return len({g(E) for E in finite_unions(Y, arity)}) == 1


def fu_homog_search(g: Callable[[frozenset], Hashable], X, m: int, arity: int | None = None) -> FinSetSequence:
    """Least ``m`` blocks from ``FU(X)`` (binary order) whose ``FU^{<=r}`` is ``g``-monochromatic."""
    cands = finite_unions(X)
    state: dict = {}

    def partial(ch):
        # Only the unions involving the newest block need checking.
        new = ch[-1]
        color = state.get("color") if len(ch) > 1 else g(new)
        for E in finite_unions(ch, arity):
            if new <= E and g(E) != color:
                return False
        state["color"] = color
        return True

    got = _fu_dfs(cands, m, arity, partial, lambda ch: True)
    if got is None:
        raise Exhausted(f"no {m} blocks of FU(X) with a monochromatic span")
    return FinSetSequence(got)


def fu_offsets(gs: Sequence[Callable[[frozenset], Hashable]], Y, arity: int | None, min_tail: int = 2):
    """Least offsets ``o_n`` with ``FU^{<=r}(Y[o_n:])`` monochromatic under ``g_n`` (``None`` if none)."""
    Y = list(Y)
    out = []
    for g in gs:
        off = None
        for o in range(0, len(Y) - min_tail + 1):
            if _fu_mono(g, Y[o:], arity):
                off = o
                break
        out.append(off)
    return out


def fu_homog_iterated(gs: Sequence[Callable[[frozenset], Hashable]], X, m: int, arity: int | None = 2,
                      min_tail: int = 2) -> tuple[FinSetSequence, list[int]]:
    """One ``Y`` of length ``m`` with, for every coloring, a tail of length ``>= min_tail``
    whose bounded union span is monochromatic.  Offsets are the least that work."""
    if m < min_tail:
        raise ValueError("m must be at least min_tail")
    cands = finite_unions(X)
    last_start = m - min_tail

    def partial(ch):
        d = len(ch)
        if d <= last_start:
            return True
        # every offset o <= last_start is already pinned down on ch[o:d]
        for g in gs:
            if not any(_fu_mono(g, ch[o:], arity) for o in range(0, last_start + 1)):
                return False
        return True

    def full(ch):
        return all(o is not None for o in fu_offsets(gs, ch, arity, min_tail))

    got = _fu_dfs(cands, m, arity, partial, full)
    if got is None:
        raise Exhausted("no block sequence meets every coloring within the window")
    return FinSetSequence(got), fu_offsets(gs, got, arity, min_tail)


__all__ = [
    "Check", "CarlsonCertificate", "MatchStructure", "ThinReduction", "HALF", "HALF_ALL", "FULL",
    "is_weakly_thin", "is_thin", "thin_refine", "check_match", "find_half_match",
    "find_half_match_all", "full_match_case", "find_full_match", "carlson_search",
    "carlson_search_growing", "fu_homog_search", "fu_homog_iterated", "fu_offsets",
]
