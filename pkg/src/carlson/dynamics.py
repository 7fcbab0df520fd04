"""Shift factors, recurrence and proximality on finite windows.

For a coloring ``f`` and ``ell``, the factor ``S^ell_p(f)`` is the coloring
``q -> f(q | p)`` of the words inside ``[0, ell)`` (the empty word included).
Because canonical indices add over disjoint unions, the table of ``f`` on the
window ``[0, B)`` reshaped to ``((k+1)**(B-ell), (k+1)**ell)`` lists every
factor ``S^ell_p(f)`` with ``p`` inside ``[ell, B)``, one per row, in
canonical order of ``p`` (row 0 is ``p`` empty).  Most checks below are
row comparisons on that matrix.

Every existential over an infinite range is bounded by ``B``; a negative
answer means "refuted within the bound", nothing more.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Mapping, Sequence

import numpy as np

from .coloring import Coloring, digit_matrix
from .core import (
    EMPTY,
    Alphabet,
    LocatedVariableWord,
    LocatedWord,
    Window,
    _Located,
    canonical_index,
    union,
    union_all,
    word_from_index,
)
from .errors import (
    AmbiguousLimit,
    Exhausted,
    PreconditionFailed,
    ScheduleGap,
    VerificationFailed,
    WindowOverflow,
)
from .hj import candidates, hj_witness
from .spans import MODE_A, BlockSequence, FinSetSequence, WeakBlockSequence, iter_span, weak_span
from .towsner import CarlsonCertificate, fu_homog_iterated

WEAK = "weak"
PLAIN = "plain"
STRONG = "strong"
UNIFORM = "uniform"


# ---------------------------------------------------------------------------
# Factors
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Factor:
    """A coloring of the words inside ``[0, ell)``, tabulated by canonical index."""

    ell: int
    table: tuple[int, ...]

    def restrict(self, ell: int, k: int) -> "Factor":
        if ell > self.ell:
            raise ValueError("cannot restrict to a larger level")
        return Factor(ell, self.table[: (k + 1) ** ell])

    def shift(self, p: _Located, ell: int, alphabet: Alphabet) -> "Factor":
        """``S^ell_p`` applied to this finite coloring (``p`` inside ``[ell, self.ell)``)."""
        if p.entries and (p.min_pos < ell or p.max_pos >= self.ell):
            raise WindowOverflow(f"{p.render()} is not inside [{ell}, {self.ell})")
        base = canonical_index(p, alphabet)
        size = (alphabet.k + 1) ** ell
        return Factor(ell, tuple(self.table[base + i] for i in range(size)))

    def as_coloring(self, alphabet: Alphabet, n_colors: int) -> Coloring:
        return Coloring(alphabet, n_colors, list(self.table))

    def __repr__(self) -> str:
        body = "".join(str(c) for c in self.table) if len(self.table) <= 32 else f"{len(self.table)} entries"
        return f"Factor(ell={self.ell}, {body})"


def _size(k: int, ell: int) -> int:
    return (k + 1) ** ell


def shift_restrict(f: Coloring, ell: int, p: _Located = EMPTY) -> Factor:
    """``S^ell_p(f)``: the factor ``q -> f(q | p)`` on ``[0, ell)``."""
    if p.entries and p.min_pos < ell:
        raise ValueError(f"{p.render()} must lie at or past position {ell}")
    k = f.k
    size = _size(k, ell)
    top = max(ell, p.max_pos + 1 if p.entries else 0)
    if top <= f.window:
        vals = f.table[np.arange(size, dtype=np.int64) + canonical_index(p, f.alphabet)]
    elif f.rule is not None:
        digits = np.zeros((size, top), dtype=np.int64)
        digits[:, :ell] = digit_matrix(k, ell)
        for pos, sym in p.entries:
            digits[:, pos] = 1 + f.alphabet.rank(sym)
        vals = f.rule.on_digits(digits, f.alphabet)
    elif f.unbounded:
        vals = [f(union(word_from_index(i, f.alphabet), p)) for i in range(size)]
    else:
        raise WindowOverflow(f"{p.render()} with level {ell} leaves the window [0, {f.window})")
    return Factor(ell, tuple(int(v) for v in vals))


def factor_rows(f: Coloring, ell: int, bound: int) -> np.ndarray:
    """Row ``s`` is ``S^ell_p(f)`` for the ``s``-th word ``p`` of ``[ell, bound)`` (row 0: ``p`` empty)."""
    if bound < ell:
        raise ValueError("bound must be at least ell")
    T = f.table_upto(bound)
    return T.reshape(_size(f.k, bound - ell), _size(f.k, ell))


def _word_at(s: int, ell: int, A: Alphabet) -> LocatedWord:
    return word_from_index(s, A).shift(ell)


def _vw_rows(A: Alphabet, ell: int, bound: int):
    """Variable words inside ``[ell, bound)`` (canonical order) and their instantiation rows."""
    words, fixed, star = candidates(A, bound - ell)
    inst = fixed[:, None] + np.arange(1, A.k + 1, dtype=np.int64)[None, :] * star[:, None]
    return words, inst


def is_factor(h: Factor, f: Coloring, bound: int) -> _Located | None:
    """Least ``p`` in ``{empty} + FIN_A(h.ell, bound)`` with ``S^ell_p(f) = h``."""
    R = factor_rows(f, h.ell, bound)
    hits = np.flatnonzero((R == np.asarray(h.table)[None, :]).all(axis=1))
    return _word_at(int(hits[0]), h.ell, f.alphabet) if hits.size else None


# ---------------------------------------------------------------------------
# Recurrence and proximality
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Outcome:
    """Result of a bounded existential/universal check; falsy when refuted within the bound."""

    ok: bool
    kind: str
    ell: int
    bound: int
    witness: object = None
    counterexample: object = None

    def __bool__(self) -> bool:
        return self.ok


def check_recurrence(f: Coloring, ell: int, bound: int, kind: str = WEAK, m: int | None = None) -> Outcome:
    """Weak / plain / uniform(m) recurrence of ``f`` at level ``ell`` with existentials bounded by ``bound``.

    weak: least nonempty ``p`` in ``[ell, bound)`` with ``S^ell_p(f) = S^ell(f)``.
    plain: least variable word ``p`` whose every instantiation does so.
    uniform: every nonempty ``p`` in ``[m, bound)`` has a nonempty ``q`` in
    ``[ell, m)`` with ``S^ell_{q|p}(f) = S^ell(f)``; the counterexample is the
    first ``p`` without one.
    """
    A = f.alphabet
    R = factor_rows(f, ell, bound)
    match = (R == R[0][None, :]).all(axis=1)
    if kind == WEAK:
        hits = np.flatnonzero(match[1:])
        if hits.size:
            return Outcome(True, kind, ell, bound, _word_at(int(hits[0]) + 1, ell, A))
        return Outcome(False, kind, ell, bound)
    if kind == PLAIN:
        words, inst = _vw_rows(A, ell, bound)
        ok = match[inst].all(axis=1)
        hits = np.flatnonzero(ok)
        if hits.size:
            return Outcome(True, kind, ell, bound, words[int(hits[0])].shift(ell))
        return Outcome(False, kind, ell, bound)
    if kind == UNIFORM:
        if m is None or not ell < m <= bound:
            raise ValueError("uniform recurrence needs ell < m <= bound")
        M = match.reshape(_size(f.k, bound - m), _size(f.k, m - ell))
        has = M[:, 1:].any(axis=1)
        bad = np.flatnonzero(~has[1:])
        if bad.size:
            return Outcome(False, kind, ell, bound, None, _word_at(int(bad[0]) + 1, m, A))
        return Outcome(True, kind, ell, bound, m)
    raise ValueError(f"unknown recurrence kind {kind!r}")


def check_proximality(f: Coloring, g: Coloring, ell: int, bound: int, kind: str = WEAK) -> Outcome:
    """Weak / plain / strong proximality of ``g`` to ``f`` at level ``ell`` (least witness)."""
    A = f.alphabet
    Rf = factor_rows(f, ell, bound)
    Rg = factor_rows(g, ell, bound)
    same = (Rf == Rg).all(axis=1)
    if kind == WEAK:
        hits = np.flatnonzero(same[1:])
        if hits.size:
            return Outcome(True, kind, ell, bound, _word_at(int(hits[0]) + 1, ell, A))
        return Outcome(False, kind, ell, bound)
    words, inst = _vw_rows(A, ell, bound)
    if kind == PLAIN:
        ok = same[inst].all(axis=1)
    elif kind == STRONG:
        base = (Rg == Rg[0][None, :]).all(axis=1)
        ok = (same[inst] & base[inst]).all(axis=1)
    else:
        raise ValueError(f"unknown proximality kind {kind!r}")
    hits = np.flatnonzero(ok)
    if hits.size:
        return Outcome(True, kind, ell, bound, words[int(hits[0])].shift(ell))
    return Outcome(False, kind, ell, bound)


def recurrence_holds(f: Coloring, ell: int, p: _Located, kind: str = WEAK) -> bool:
    """Check one given witness ``p`` for weak (word) or plain (variable word) recurrence."""
    base = shift_restrict(f, ell)
    if kind == WEAK:
        return not p.is_empty and shift_restrict(f, ell, p) == base
    if kind == PLAIN:
        return isinstance(p, LocatedVariableWord) and all(
            shift_restrict(f, ell, p.instantiate(a)) == base for a in f.alphabet.letters)
    raise ValueError(kind)


def proximality_holds(f: Coloring, g: Coloring, ell: int, p: _Located, kind: str = WEAK) -> bool:
    """Check one given witness ``p`` for weak / plain / strong proximality of ``g`` to ``f``."""
    if kind == WEAK:
        return not p.is_empty and shift_restrict(g, ell, p) == shift_restrict(f, ell, p)
    if not isinstance(p, LocatedVariableWord):
        return False
    base = shift_restrict(g, ell)
    for a in f.alphabet.letters:
        w = p.instantiate(a)
        sg, sf = shift_restrict(g, ell, w), shift_restrict(f, ell, w)
        if sg != sf or (kind == STRONG and sg != base):
            return False
    if kind not in (PLAIN, STRONG):
        raise ValueError(kind)
    return True


def weaken_recurrence(p: LocatedVariableWord, alphabet: Alphabet) -> list[LocatedWord]:
    """A plain-recurrence witness yields one weak witness per letter."""
    return [p.instantiate(a) for a in alphabet.letters]


def weaken_proximality(p: LocatedVariableWord, alphabet: Alphabet, to: str = PLAIN):
    """A strong witness is a plain witness as is, and each instantiation is a weak one."""
    return p if to == PLAIN else [p.instantiate(a) for a in alphabet.letters]


def _least_q(match_row: np.ndarray) -> int:
    hits = np.flatnonzero(match_row)
    return int(hits[0]) if hits.size else -1


def ur_implies_recurrent_witness(f: Coloring, ell: int, m: int, bound: int) -> LocatedVariableWord:
    """A plain-recurrence witness at ``ell`` built from uniform recurrence with modulus ``m``.

    Colors each word ``v`` of the index window ``[0, bound - m)`` by the least
    ``q`` in ``{empty} + FIN_A(ell, m)`` with ``S^ell_{q | v shifted to m}(f) = S^ell(f)``,
    takes the least Hales-Jewett witness ``v`` with common value ``q`` and
    returns ``q | v`` shifted past ``m``.
    """
    pre = check_recurrence(f, ell, bound, UNIFORM, m)
    if not pre:
        raise PreconditionFailed(f"not uniformly recurrent at {ell} with modulus {m} within {bound}: "
                                 f"{pre.counterexample.render()} has no return")
    R = factor_rows(f, ell, bound)
    match = (R == R[0][None, :]).all(axis=1)
    M = match.reshape(_size(f.k, bound - m), _size(f.k, m - ell))
    g = np.array([_least_q(row) for row in M], dtype=np.int64)
    if (g < 0).any():  # pragma: no cover - excluded by the precondition
        raise PreconditionFailed("uniform recurrence check inconsistent")
    n = bound - m
    colors = Coloring(f.alphabet, int(g.max()) + 1, g)
    wit = hj_witness(colors, n)
    if wit is None:
        raise Exhausted(f"no Hales-Jewett witness inside a window of {n} positions")
    q = _word_at(int(wit.color), ell, f.alphabet)
    w = union(q, wit.p.shift(m))
    if not recurrence_holds(f, ell, w, PLAIN):  # pragma: no cover
        raise VerificationFailed(f"{w.render()} fails plain recurrence")
    return w


# ---------------------------------------------------------------------------
# Orbit trees and subshifts
# ---------------------------------------------------------------------------

@dataclass
class OrbitTree:
    """Factors of ``f`` per level ``ell <= depth``, each with its least witness inside ``[ell, bound)``.

    Admitted nodes are genuine nodes of the orbit tree of ``f``; nodes that
    are not admitted may only need a larger bound.
    """

    alphabet: Alphabet
    depth: int
    bound: int
    levels: list[dict[Factor, _Located]] = field(default_factory=list)
    note: str = "under-approximation: witnesses are searched inside [ell, bound) only"

    def level(self, ell: int) -> set[Factor]:
        return set(self.levels[ell])


def orbit_tree(f: Coloring, depth: int, bound: int) -> OrbitTree:
    if not depth <= bound:
        raise ValueError("depth must not exceed the bound")
    tree = OrbitTree(f.alphabet, depth, bound)
    for ell in range(depth + 1):
        R = factor_rows(f, ell, bound)
        seen: dict[Factor, _Located] = {}
        for s in range(R.shape[0]):
            h = Factor(ell, tuple(int(x) for x in R[s]))
            if h not in seen:
                seen[h] = _word_at(s, ell, f.alphabet)
        tree.levels.append(seen)
    return tree


def tree_condition(h: Factor, f: Coloring, bound: int) -> bool:
    """Membership of ``h`` in the orbit tree of ``f``: every shifted factor of ``h`` is a factor of ``f``."""
    A = f.alphabet
    for ell in range(h.ell):
        known = {tuple(int(x) for x in row) for row in factor_rows(f, ell, bound)}
        for s in range(_size(A.k, h.ell - ell)):
            q = _word_at(s, ell, A)
            if h.shift(q, ell, A).table not in known:
                return False
    return True


def _shifts(h: Factor, ell: int, A: Alphabet) -> Iterable[tuple[_Located, Factor]]:
    for s in range(_size(A.k, h.ell - ell)):
        q = _word_at(s, ell, A)
        yield q, h.shift(q, ell, A)


def subshift_check(levels: Sequence[Iterable[Factor]], alphabet: Alphabet, ell: int | None = None,
                   p: _Located | None = None):
    """Closure of a finite family under shifts.

    ``levels[L]`` is the family (colorings truncated to ``[0, L)``); lower
    levels must contain every shifted factor ``S^ell_p(h)`` of a top member.
    With ``ell`` and ``p`` given only that shift is checked.  Returns a
    ``(ok, counterexample)`` pair where the counterexample is
    ``(h, ell, p)``.
    """
    sets = [set(lv) for lv in levels]
    top = len(sets) - 1
    for h in sorted(sets[top], key=lambda x: x.table):
        ells = [ell] if ell is not None else range(top + 1)
        for e in ells:
            pairs = [(p, h.shift(p, e, alphabet))] if p is not None else _shifts(h, e, alphabet)
            for q, s in pairs:
                if s not in sets[e]:
                    return False, (h, e, q)
    return True, None


def _family_levels(family: Iterable[Factor], depth: int, k: int) -> list[set[Factor]]:
    fam = list(family)
    return [{h.restrict(e, k) for h in fam} for e in range(depth + 1)]


def _largest_closed(family: set[Factor], depth: int, A: Alphabet) -> set[Factor]:
    fam = set(family)
    while fam:
        lv = _family_levels(fam, depth, A.k)
        drop = {h for h in fam
                if any(s not in lv[e] for e in range(depth + 1) for _, s in _shifts(h, e, A))}
        if not drop:
            break
        fam -= drop
    return fam


def _has_factor(h: Factor, small: Factor, A: Alphabet) -> bool:
    return any(s == small for _, s in _shifts(h, small.ell, A))


def minimal_check(tree: OrbitTree, budget: int | None = None) -> list[set[Factor]]:
    """Exclusion sweep towards a minimal subfamily of the top-level factors.

    Candidate factors (all levels, shortest first) are excluded one at a
    time; an exclusion is kept when the largest shift-closed subfamily that
    avoids the candidate is nonempty.  Returns the refined level sets.
    """
    A = tree.alphabet
    depth = tree.depth
    fam = _largest_closed(set(tree.levels[depth]), depth, A)
    if not fam:
        return _family_levels(set(tree.levels[depth]), depth, A.k)
    sweep = [h for e in range(depth + 1) for h in sorted(tree.levels[e], key=lambda x: x.table)]
    if budget is not None:
        sweep = sweep[:budget]
    for small in sweep:
        trial = {h for h in fam if not _has_factor(h, small, A)}
        trial = _largest_closed(trial, depth, A)
        if trial:
            fam = trial
    return _family_levels(fam, depth, A.k)


# ---------------------------------------------------------------------------
# FU^{<=2} limits
# ---------------------------------------------------------------------------

def flim_check(f: Coloring, g: Coloring, X: WeakBlockSequence, ell: int, skip: int = 0):
    """Whether ``S^ell_p(f) = S^ell(g)`` for every union ``p`` of at most two members of ``X[skip:]``.

    Returns ``(ok, counterexample)``.
    """
    target = shift_restrict(g, ell)
    for p in weak_span(X[skip:], 2):
        if p.min_pos < ell or shift_restrict(f, ell, p) != target:
            return False, p
    return True, None


@dataclass
class FlimResult:
    """A limit coloring ``g`` (window ``[0, ell_max)``), the refined weak block sequence, and per-level offsets."""

    g: Coloring
    Y: WeakBlockSequence
    offsets: list[int]
    factors: list[Factor]


def flim_search(f: Coloring, X: WeakBlockSequence, ell_max: int, length: int | None = None,
                min_tail: int = 2) -> FlimResult:
    """Finite shadow of the existence of an ``FU^{<=2}``-limit.

    The members of ``X`` become the points of a finite-union space; for each
    level ``ell <= ell_max`` the union ``F`` is colored by the factor
    ``S^ell_{pi(F)}(f)`` (by a marker when ``pi(F)`` reaches below ``ell``).  The
    iterated finite-union search picks one block sequence ``D`` with a
    monochromatic bounded-union tail for every level; the tail color at each
    level is the limit factor.  The per-factor indicator colorings are
    re-checked so that two distinct stabilizing factors raise
    ``AmbiguousLimit``.
    """
    A = f.alphabet
    X = X if isinstance(X, WeakBlockSequence) else WeakBlockSequence(X)
    members = list(X)
    idx_sets = FinSetSequence([{i} for i in range(len(members))])
    length = length if length is not None else len(members)

    def pi(E: frozenset) -> _Located:
        return union_all(members[i] for i in sorted(E))

    caches: list[dict] = [dict() for _ in range(ell_max + 1)]

    def chi(ell: int):
        cache = caches[ell]

        def color(E: frozenset):
            if E not in cache:
                p = pi(E)
                cache[E] = ("below", E) if p.min_pos < ell else shift_restrict(f, ell, p)
            return cache[E]

        return color

    colorings = [chi(e) for e in range(ell_max + 1)]
    D, offsets = fu_homog_iterated(colorings, idx_sets, length, arity=2, min_tail=min_tail)
    from .spans import finite_unions

    factors = []
    for e, o in enumerate(offsets):
        vals = {colorings[e](E) for E in finite_unions(D[o:], 2)}
        h = next(iter(vals))
        if not isinstance(h, Factor):
            raise Exhausted(f"no tail past position {e}")
        # Cross-check through the indicator colorings C_h: only one factor may
        # fill a whole tail.
        realized = {colorings[e](E) for E in finite_unions(D, 2)} - {h}
        for other in realized:
            if not isinstance(other, Factor):
                continue
            for o2 in range(len(D) - min_tail + 1):
                if all(colorings[e](E) == other for E in finite_unions(D[o2:], 2)):
                    raise AmbiguousLimit(f"factors {h} and {other} both stabilize at level {e}")
        factors.append(h)
    for e in range(ell_max):
        if factors[e + 1].restrict(e, A.k) != factors[e]:  # pragma: no cover - forced by construction
            raise AmbiguousLimit(f"limit factors at levels {e} and {e + 1} disagree")
    g = Coloring(A, f.n_colors, list(factors[-1].table))
    Y = WeakBlockSequence(pi(E) for E in D)
    return FlimResult(g, Y, list(offsets), factors)


def weak_proximality_from_flim(f: Coloring, res: FlimResult, ell: int) -> LocatedWord:
    """The weak-proximality witness read off a limit: ``p`` from the level-``ell`` tail,
    then ``q`` from the tail at level ``1 + max p``; returns ``p`` after checking
    ``S^ell_p(f) = S^ell(g) = S^ell_{p|q}(f) = S^ell_p(g)``."""
    Y = list(res.Y)
    p = Y[res.offsets[ell]]
    m = 1 + p.max_pos
    if m >= len(res.offsets):
        raise Exhausted(f"limit known up to level {len(res.offsets) - 1}, level {m} needed")
    qs = [w for w in Y[res.offsets[m]:] if w.min_pos > p.max_pos]
    if not qs:
        raise Exhausted("no second member past the first")
    q = qs[0]
    g = res.g
    base = shift_restrict(g, ell)
    chain = (shift_restrict(f, ell, p), base, shift_restrict(f, ell, union(p, q)), shift_restrict(g, ell, p))
    if any(c != base for c in chain):
        raise VerificationFailed(f"limit equalities fail at {p.render()}, {q.render()}")
    return p


# ---------------------------------------------------------------------------
# Witness schedules and extraction
# ---------------------------------------------------------------------------

@dataclass
class WitnessSchedule:
    """Per-level witnesses ``(ell, p)`` ordered by ``ell``."""

    entries: list[tuple[int, _Located]]

    def __post_init__(self):
        ells = [e for e, _ in self.entries]
        if ells != sorted(ells) or len(set(ells)) != len(ells):
            raise ValueError("schedule levels must be strictly increasing")
        for e, p in self.entries:
            if p.entries and p.min_pos < e:
                raise ValueError(f"witness {p.render()} does not lie past {e}")

    def lookup(self) -> Mapping[int, _Located]:
        return dict(self.entries)


def _chain(sched: WitnessSchedule, m: int) -> list[LocatedVariableWord]:
    table = sched.lookup()
    ell = 0
    X = []
    for _ in range(m):
        if ell not in table:
            raise ScheduleGap(f"no witness for level {ell}")
        p = table[ell]
        if not isinstance(p, LocatedVariableWord):
            raise ScheduleGap(f"witness at level {ell} is not a variable word")
        X.append(p)
        ell = 1 + p.max_pos
    return X


def recurrence_schedule(f: Coloring, m: int, bound: int) -> WitnessSchedule:
    """Plain-recurrence witnesses along the levels the extraction will ask for."""
    ell = 0
    entries = []
    for _ in range(m):
        out = check_recurrence(f, ell, max(bound, ell + 1), PLAIN)
        if not out:
            raise Exhausted(f"no plain-recurrence witness at level {ell} below {bound}")
        entries.append((ell, out.witness))
        ell = 1 + out.witness.max_pos
    return WitnessSchedule(entries)


def proximality_schedule(f: Coloring, g: Coloring, m: int, bound: int) -> WitnessSchedule:
    ell = 0
    entries = []
    for _ in range(m):
        out = check_proximality(f, g, ell, max(bound, ell + 1), STRONG)
        if not out:
            raise Exhausted(f"no strong-proximality witness at level {ell} below {bound}")
        entries.append((ell, out.witness))
        ell = 1 + out.witness.max_pos
    return WitnessSchedule(entries)


def _span_colors(f: Coloring, X) -> set:
    return {f(w) for w in iter_span(X, f.alphabet, MODE_A)}


def _cert(f: Coloring, X: BlockSequence, color) -> CarlsonCertificate:
    return CarlsonCertificate(f.content_hash(), X, color, None, Window(X.max_pos + 1))


def extract_from_recurrent(f: Coloring, sched: WitnessSchedule, m: int) -> CarlsonCertificate:
    """Stack the scheduled witnesses: level ``ell`` advances to ``1 + max dom`` of the last block."""
    X = BlockSequence(_chain(sched, m))
    color = f(EMPTY)
    if _span_colors(f, X) != {color}:
        raise VerificationFailed("span is not homogeneous for the color of the empty word")
    return _cert(f, X, color)


def extract_from_proximal(f: Coloring, g: Coloring, sched: WitnessSchedule, m: int):
    """One block sequence whose span is both ``f``- and ``g``-homogeneous for ``g(empty)``."""
    X = BlockSequence(_chain(sched, m))
    color = g(EMPTY)
    if _span_colors(g, X) != {color}:
        raise VerificationFailed("g-side span is not homogeneous for g(empty)")
    if _span_colors(f, X) != {color}:
        raise VerificationFailed("f-side span is not homogeneous for g(empty)")
    return _cert(f, X, color), _cert(g, X, color)


def strengthen_proximality(f: Coloring, g: Coloring, ell: int, m: int, bound: int,
                           max_hj: int | None = None) -> LocatedVariableWord:
    """A strong-proximality witness from uniform recurrence of ``g`` plus weak proximality.

    For growing ``N``: take the least ``p`` (possibly empty) past ``m + N``
    with ``S^{m+N}_p(g) = S^{m+N}_p(f)``; color each ``v`` inside ``[m, m+N)``
    by the least ``q`` in ``{empty} + FIN_A(ell, m)`` with
    ``S^ell_{q|v|p}(g) = S^ell(g)``; a Hales-Jewett witness ``u`` with common
    value ``q`` gives ``w = q | u | p``.
    """
    A = f.alphabet
    pre = check_recurrence(g, ell, bound, UNIFORM, m)
    if not pre:
        raise PreconditionFailed(f"g is not uniformly recurrent at {ell} with modulus {m} within {bound}")
    base = shift_restrict(g, ell)
    top = bound - m if max_hj is None else min(max_hj, bound - m)
    for N in range(1, top + 1):
        lvl = m + N
        Rf = factor_rows(f, lvl, bound)
        Rg = factor_rows(g, lvl, bound)
        hits = np.flatnonzero((Rf == Rg).all(axis=1))
        if not hits.size:
            continue
        p = _word_at(int(hits[0]), lvl, A)
        qs = [EMPTY] + [_word_at(s, ell, A) for s in range(1, _size(A.k, m - ell))]
        none = len(qs)

        def h(v, p=p, N=N):
            vv = v.shift(m)
            for j, q in enumerate(qs):
                if shift_restrict(g, ell, union(union(q, vv), p)) == base:
                    return j
            return none

        table = [h(word_from_index(i, A)) for i in range(_size(A.k, N))]
        wit = hj_witness(Coloring(A, none + 1, table), N, accept=lambda c: c != none)
        if wit is None:
            continue
        w = union(union(qs[wit.color], wit.p.shift(m)), p)
        if not proximality_holds(f, g, ell, w, STRONG):
            raise VerificationFailed(f"{w.render()} fails the strong-proximality equalities")
        return w
    if not check_proximality(f, g, m + 1, bound, WEAK) and not (
            (factor_rows(f, m + 1, bound)[0] == factor_rows(g, m + 1, bound)[0]).all()):
        raise PreconditionFailed(f"g is not weakly proximal to f past {m + 1} within {bound}")
    raise Exhausted(f"no strong-proximality witness assembled below {bound}")


__all__ = [
    "Factor", "FlimResult", "OrbitTree", "Outcome", "WitnessSchedule", "WEAK", "PLAIN", "STRONG", "UNIFORM",
    "shift_restrict", "factor_rows", "is_factor", "check_recurrence", "check_proximality",
    "recurrence_holds", "proximality_holds", "weaken_recurrence", "weaken_proximality",
    "ur_implies_recurrent_witness", "orbit_tree", "tree_condition", "subshift_check", "minimal_check",
    "flim_check", "flim_search", "weak_proximality_from_flim", "recurrence_schedule",
    "proximality_schedule", "extract_from_recurrent", "extract_from_proximal", "strengthen_proximality",
]
