"""Canonical isomorphisms between naturals, finite sets, and located words.

Binary encoding identifies positive naturals with nonempty finite sets of
naturals.  A 2-apart sequence (binary expansions in disjoint, increasing bit
ranges) turns finite sums into an isomorphic copy of the naturals, and any
increasing sequence can be refined to one by summing consecutive blocks.
Block sequences of sets or of variable words give isomorphic copies of the
whole space by substituting blocks for points.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Iterable, Iterator, Sequence

import numpy as np

from . import kernels
from .coloring import Coloring
from .core import EMPTY, STAR, Alphabet, _Located, make_word, word_from_index
from .errors import BudgetExhausted, EmptySet, IndexOutOfRange, ParseError, ZeroInput
from .spans import BlockSequence, FinSetSequence, VariableWordList


# ---------------------------------------------------------------------------
# Binary encoding and apartness
# ---------------------------------------------------------------------------

def nat_to_finset(n: int) -> frozenset[int]:
    """Bit positions of ``n``."""
    if n < 1:
        raise ZeroInput(f"binary encoding needs a positive integer, got {n}")
    out = []
    i = 0
    while n:
        if n & 1:
            out.append(i)
        n >>= 1
        i += 1
    return frozenset(out)


def finset_to_nat(E: Iterable[int]) -> int:
    E = set(E)
    if not E:
        raise EmptySet("the empty set has no binary code")
    return sum(1 << i for i in E)


@dataclass(frozen=True)
class ApartnessProfile:
    n: int
    lam: int
    mu: int


def lam(n: int) -> int:
    """Lowest set bit."""
    if n < 1:
        raise ZeroInput(f"lambda is undefined at {n}")
    return (n & -n).bit_length() - 1


def mu(n: int) -> int:
    """Highest set bit."""
    if n < 1:
        raise ZeroInput(f"mu is undefined at {n}")
    return n.bit_length() - 1


def profile(n: int) -> ApartnessProfile:
    return ApartnessProfile(n, lam(n), mu(n))


def is_two_apart(A: Sequence[int]) -> bool:
    """Whether consecutive elements occupy disjoint, increasing bit ranges."""
    A = list(A)
    for x in A:
        if x < 1:
            raise ZeroInput(f"{x} has no binary profile")
    for x, y in zip(A, A[1:]):
        if not x < y:
            raise ValueError("sequence must be strictly increasing")
    return all(mu(x) < lam(y) for x, y in zip(A, A[1:]))


# ---------------------------------------------------------------------------
# Normalization to a 2-apart refinement
# ---------------------------------------------------------------------------

class _Reader:
    """Validated, budgeted pulls from an increasing stream, with push-back."""

    def __init__(self, stream: Iterable[int], budget: int | None):
        self.it = iter(stream)
        self.last = 0
        self.budget = budget
        self.consumed = 0
        self._back: list[int] = []

    def pull(self, n: int) -> list[int]:
        """Between one and ``n`` elements; raises ``BudgetExhausted`` when none are left."""
        if self.budget is not None:
            n = max(0, min(n, self.budget - self.consumed))
        out = self._back[:n]
        del self._back[:n]
        if len(out) < n:
            fresh = list(itertools.islice(self.it, n - len(out)))
            if fresh:
                self._validate(fresh)
                self.last = fresh[-1]
            out += fresh
        if not out:
            if self.budget is not None and self.consumed >= self.budget:
                raise BudgetExhausted(f"stream budget of {self.budget} elements consumed")
            raise BudgetExhausted(f"stream ended after {self.consumed} elements")
        self.consumed += len(out)
        return out

    def _validate(self, fresh: list[int]) -> None:
        try:
            arr = np.asarray(fresh, dtype=np.int64)
        except (OverflowError, TypeError):
            arr = None
        if arr is not None and fresh[0] > self.last and (arr.size < 2 or bool((arr[1:] > arr[:-1]).all())):
            return
        # slow path: locate the offending element (or handle integers past int64)
        last = self.last
        for x in fresh:
            if x <= last:
                if x < 1:
                    raise ZeroInput(f"stream elements must be positive, got {x}")
                raise ValueError(f"stream is not strictly increasing at {x}")
            last = x

    def unread(self, xs: list[int]) -> None:
        self._back[:0] = xs
        self.consumed -= len(xs)

    def next(self) -> int:
        return self.pull(1)[0]


# Sums stay below this bound on the int64 kernel path.
_INT64_SAFE = 1 << 62


def _high_lambda(reader: _Reader, k: int) -> tuple[int, ...]:
    # Pending blocks are indexed by their lambda, like the digits of a binary
    # counter; two blocks with equal lambda add to a strictly larger lambda.
    # The counter runs in a kernel while every sum fits in int64.
    if k >= 62:
        return _high_lambda_ints(reader, k, {})
    counter = kernels.get("lambda_counter")
    members = kernels.get("members_of")
    pend_sum = np.zeros(64, dtype=np.int64)
    pend_root = np.full(64, -1, dtype=np.int64)
    vals = np.empty(0, dtype=np.int64)
    parent = np.empty(0, dtype=np.int64)
    n, size, total = 0, 64, 0
    while True:
        xs = reader.pull(size)
        total += len(xs) * xs[-1]
        if total >= _INT64_SAFE:
            reader.unread(xs)
            pending = {}
            for low in np.flatnonzero(pend_root >= 0):
                mask = members(parent, n, pend_root[low])
                pending[int(low)] = (vals[:n][mask].tolist(), int(pend_sum[low]))
            return _high_lambda_ints(reader, k, pending)
        if n + len(xs) > vals.size:
            cap = max(2 * vals.size, n + len(xs))
            vals = np.resize(vals, cap)
            parent = np.resize(parent, cap)
        arr = np.asarray(xs, dtype=np.int64)
        vals[n: n + len(xs)] = arr
        i, root = counter(arr, k, pend_sum, pend_root, parent, n)
        if i >= 0:
            reader.unread(xs[i + 1:])
            used = n + i + 1
            return tuple(vals[:used][members(parent, used, root)].tolist())
        n += len(xs)
        size = min(2 * size, 1 << 16)


def _high_lambda_ints(reader: _Reader, k: int, pending: dict[int, tuple[list[int], int]]) -> tuple[int, ...]:
    # Same counter on Python integers, for sums past int64.
    while True:
        xs = reader.pull(4096)
        for i, x in enumerate(xs):
            block, s = [x], x
            low = (s & -s).bit_length() - 1
            while low < k and low in pending:
                prev, ps = pending.pop(low)
                if len(prev) < len(block):
                    prev, block = block, prev
                prev.extend(block)
                block, s = prev, ps + s
                low = (s & -s).bit_length() - 1
            if low >= k:
                reader.unread(xs[i + 1:])
                return tuple(sorted(block))
            pending[low] = (block, s)


def find_high_lambda(X: Iterable[int], k: int, budget: int | None = 10_000) -> frozenset[int]:
    """A finite subset of the stream ``X`` whose sum has lowest bit at least ``k``."""
    return frozenset(_high_lambda(_Reader(X, budget), k))


@dataclass
class FSRefinement:
    """A lazily grown 2-apart refinement ``Y`` of an increasing stream ``X``.

    ``blocks[n]`` lists the input elements summed into ``sums[n]``; blocks are
    consecutive in the sense that ``max blocks[n] < min blocks[n+1]``.
    """

    base: Iterable[int]
    budget: int | None = 10_000
    blocks: list[tuple[int, ...]] = field(default_factory=list)
    sums: list[int] = field(default_factory=list)

    def __post_init__(self):
        self._reader = _Reader(self.base, self.budget)

    def _grow(self) -> None:
        if not self.blocks:
            block = (self._reader.next(),)
        else:
            # Strengthened step: the next sum starts above the previous top bit.
            block = _high_lambda(self._reader, mu(self.sums[-1]) + 1)
        self.blocks.append(block)
        self.sums.append(sum(block))

    def take(self, n: int) -> list[int]:
        while len(self.sums) < n:
            self._grow()
        return self.sums[:n]

    def __iter__(self) -> Iterator[tuple[tuple[int, ...], int]]:
        i = 0
        while True:
            if i >= len(self.sums):
                self._grow()
            yield self.blocks[i], self.sums[i]
            i += 1


def normalize_two_apart(X: Iterable[int], budget: int | None = 10_000) -> FSRefinement:
    return FSRefinement(X, budget)


def is_fs_refinement(X: Sequence[int], blocks: Sequence[Sequence[int]], sums: Sequence[int]) -> bool:
    """Check a provided witness for ``Y <=_FS X``: ordered blocks of ``X`` with the given sums."""
    members = set(X)
    prev = -1
    for block, s in zip(blocks, sums, strict=True):
        if not block or any(x not in members for x in block):
            return False
        if min(block) <= prev or sum(block) != s:
            return False
        prev = max(block)
    return True


# ---------------------------------------------------------------------------
# Block substitutions
# ---------------------------------------------------------------------------

def iota_fs(A: Sequence[int], n: int) -> int:
    """``sum_{i in E} 2^i  ->  sum_{i in E} a_i`` for a 2-apart sequence ``A``."""
    total = 0
    for i in nat_to_finset(n):
        if i >= len(A):
            raise IndexOutOfRange(f"bit {i} beyond the {len(A)} available terms")
        total += A[i]
    return total


def iota_fu(X: FinSetSequence | Sequence[Iterable[int]], E: Iterable[int]) -> frozenset[int]:
    """Union of the blocks of ``X`` indexed by ``E``."""
    blocks = X.items if isinstance(X, FinSetSequence) else tuple(frozenset(b) for b in X)
    out: set[int] = set()
    for n in E:
        if not 0 <= n < len(blocks):
            raise IndexOutOfRange(f"index {n} outside a sequence of {len(blocks)} blocks")
        out |= blocks[n]
    return frozenset(out)


def iota_located(X: BlockSequence | Sequence[_Located], q: _Located):
    """Substitute ``X[n]`` instantiated by ``q(n)`` at every index ``n`` of ``q``."""
    blocks = tuple(X)
    entries: list = []
    for n, s in q.entries:
        if not 0 <= n < len(blocks):
            raise IndexOutOfRange(f"index {n} outside a sequence of {len(blocks)} blocks")
        entries.extend(blocks[n].instantiate(s).entries)
    return make_word(entries)


def canonical_words(n: int) -> VariableWordList:
    """The all-variable words of lengths ``1, 2, 4, ..., 2**(n-1)``."""
    return VariableWordList(STAR * (1 << i) for i in range(n))


def collapse_to_words(p: _Located, ws: VariableWordList | Sequence[str]) -> str:
    """Concatenate ``ws[n]`` instantiated by ``p(n)`` along increasing ``n``."""
    ws = tuple(ws)
    parts = []
    for n, s in p.entries:
        if not 0 <= n < len(ws):
            raise IndexOutOfRange(f"index {n} outside a list of {len(ws)} words")
        parts.append(ws[n].replace(STAR, s))
    return "".join(parts)


def lift_from_words(u: str, alphabet: Alphabet | None = None):
    """Inverse of ``collapse_to_words`` against the dyadic all-variable words."""
    entries = []
    pos = 0
    for n in sorted(nat_to_finset(len(u))) if u else ():
        seg = u[pos: pos + (1 << n)]
        if len(set(seg)) != 1:
            raise ParseError(f"segment {seg!r} of {u!r} is not a constant block")
        if alphabet is not None and seg[0] != STAR and seg[0] not in alphabet.letters:
            raise ParseError(f"unknown symbol {seg[0]!r}")
        entries.append((n, seg[0]))
        pos += 1 << n
    return make_word(entries) if entries else EMPTY


def transport_coloring(f: Coloring, X: BlockSequence | Sequence[_Located]) -> Coloring:
    """The coloring ``q -> f(iota_X(q))`` on the index window ``[0, len(X))``."""
    blocks = tuple(X)
    n = len(blocks)
    table = [f(iota_located(blocks, word_from_index(i, f.alphabet))) for i in range((f.k + 1) ** n)]
    return Coloring(f.alphabet, f.n_colors, table)
