"""Block sequences and the finite combinatorial spaces they generate.

``iter_span`` is the streaming contract: it yields ``[X]_A`` / ``[X]_{A*}``
(optionally with bounded union arity) in canonical order without
materializing the whole list.  Everything else here is a small wrapper.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Callable, Hashable, Iterable, Iterator, Sequence

from .core import (
    EMPTY,
    STAR,
    Alphabet,
    LocatedVariableWord,
    LocatedWord,
    _Located,
    parse_words,
    union,
)
from .errors import EmptySet

MODE_A = "A"
MODE_ASTAR = "A*"


def _check_increasing(items: Sequence[_Located]) -> None:
    for a, b in zip(items, items[1:]):
        if not a.entries[-1][0] < b.entries[0][0]:
            raise ValueError(f"blocks {a.render()} and {b.render()} are not in increasing order")


class _WordSequence:
    item_type: type = _Located
    __slots__ = ("items",)

    def __init__(self, items: Iterable[_Located] = ()):
        items = tuple(items)
        for w in items:
            if not isinstance(w, self.item_type):
                raise TypeError(f"{type(self).__name__} holds {self.item_type.__name__}, got {w!r}")
            if w.is_empty:
                raise ValueError("blocks must be nonempty")
        _check_increasing(items)
        self.items = items

    @classmethod
    def parse(cls, text: str, alphabet: Alphabet | None = None):
        return cls(parse_words(text, alphabet))

    def __len__(self) -> int:
        return len(self.items)

    def __iter__(self) -> Iterator:
        return iter(self.items)

    def __getitem__(self, i):
        if isinstance(i, slice):
            return type(self)(self.items[i])
        return self.items[i]

    def __eq__(self, other) -> bool:
        return type(self) is type(other) and self.items == other.items

    def __hash__(self) -> int:
        return hash((type(self).__name__, self.items))

    def after(self, pos: int):
        """Members whose domain lies strictly past ``pos`` (the tail ``X - F``)."""
        return type(self)(w for w in self.items if w.entries[0][0] > pos)

    def past(self, ell: int):
        """Members contained in ``[ell, inf)``."""
        return type(self)(w for w in self.items if w.entries[0][0] >= ell)

    @property
    def max_pos(self) -> int:
        return self.items[-1].max_pos if self.items else -1

    def render(self) -> str:
        return ",".join(w.render() for w in self.items)

    def __repr__(self) -> str:
        return f"{type(self).__name__}([{self.render()}])"


class BlockSequence(_WordSequence):
    """Finite increasing sequence of located variable words."""

    item_type = LocatedVariableWord
    __slots__ = ()


class WeakBlockSequence(_WordSequence):
    """Finite increasing sequence of (nonempty) located words."""

    item_type = LocatedWord
    __slots__ = ()


@dataclass(frozen=True)
class FinSetSequence:
    """Block sequence of nonempty finite sets of naturals."""

    items: tuple[frozenset, ...]

    def __init__(self, items: Iterable[Iterable[int]] = ()):
        items = tuple(frozenset(s) for s in items)
        for s in items:
            if not s:
                raise ValueError("blocks must be nonempty")
        for a, b in zip(items, items[1:]):
            if not max(a) < min(b):
                raise ValueError(f"{sorted(a)} and {sorted(b)} are not in increasing order")
        object.__setattr__(self, "items", items)

    def __len__(self) -> int:
        return len(self.items)

    def __iter__(self):
        return iter(self.items)

    def __getitem__(self, i):
        if isinstance(i, slice):
            return FinSetSequence(self.items[i])
        return self.items[i]


@dataclass(frozen=True)
class VariableWordList:
    """Classical variable words: strings over the letters and ``*`` with ``*`` present."""

    items: tuple[str, ...]

    def __init__(self, items: Iterable[str]):
        items = tuple(items)
        for w in items:
            if STAR not in w:
                raise ValueError(f"{w!r} is not a variable word")
        object.__setattr__(self, "items", items)

    def __len__(self) -> int:
        return len(self.items)

    def __iter__(self):
        return iter(self.items)

    def __getitem__(self, i):
        return self.items[i]


# ---------------------------------------------------------------------------
# Spans of located words
# ---------------------------------------------------------------------------

def _symbols(alphabet: Alphabet, mode: str) -> tuple[str, ...]:
    if mode == MODE_A:
        return alphabet.letters
    if mode == MODE_ASTAR:
        return (STAR,) + alphabet.letters
    raise ValueError(f"mode must be 'A' or 'A*', got {mode!r}")


def _gen(blocks, symbols, upto: int, arity: int | None) -> Iterator[_Located]:
    # Canonical order: the highest block used decides first, then its symbol,
    # then (recursively) the lower part, with the empty lower part first.
    if arity is not None and arity <= 0:
        return
    for j in range(upto):
        for s in symbols:
            top = blocks[j].instantiate(s)
            yield top
            for rest in _gen(blocks, symbols, j, None if arity is None else arity - 1):
                yield union(rest, top)


def iter_span(X: Iterable[LocatedVariableWord], alphabet: Alphabet, mode: str = MODE_A,
              arity: int | None = None) -> Iterator[_Located]:
    """Stream the span of ``X`` in canonical order.

    ``mode='A'`` instantiates every chosen block by a letter; ``mode='A*'``
    also allows the variable and keeps only results where it survives.
    ``arity`` bounds how many blocks take part in a union (``None``: any).
    """
    blocks = tuple(X)
    symbols = _symbols(alphabet, mode)
    gen = _gen(blocks, symbols, len(blocks), arity)
    if mode == MODE_ASTAR:
        return (w for w in gen if isinstance(w, LocatedVariableWord))
    return gen


def span_located(X: Iterable[LocatedVariableWord], alphabet: Alphabet, mode: str = MODE_A,
                 arity: int | None = None) -> list:
    """``[X]_A``, ``[X]_{A*}`` or their arity-bounded forms, as a canonical-order list."""
    return list(iter_span(X, alphabet, mode, arity))


def span_with_empty(X: Iterable[LocatedVariableWord], alphabet: Alphabet, arity: int | None = None) -> list:
    """``[X]_A`` together with the empty word (listed first)."""
    return [EMPTY] + span_located(X, alphabet, MODE_A, arity)


def weak_span(X: Iterable[LocatedWord], arity: int | None = None) -> list[LocatedWord]:
    """``[X]^{<=r}_A`` for a weak block sequence: unions of at most ``arity`` members."""
    blocks = tuple(X)
    r = len(blocks) if arity is None else min(arity, len(blocks))
    out = []
    for size in range(1, r + 1):
        for combo in itertools.combinations(blocks, size):
            w = EMPTY
            for b in combo:
                w = union(w, b)
            out.append(w)
    return out


# ---------------------------------------------------------------------------
# Integers and finite sets
# ---------------------------------------------------------------------------

def finite_sums(Y: Iterable[int], arity: int | None = None) -> set[int]:
    """Sums over nonempty subsets of ``Y`` with at most ``arity`` elements."""
    ys = list(Y)
    if len(set(ys)) != len(ys):
        raise ValueError("elements must be distinct")
    r = len(ys) if arity is None else min(arity, len(ys))
    sums: set[int] = set()
    for size in range(1, r + 1):
        for combo in itertools.combinations(ys, size):
            sums.add(sum(combo))
    return sums


def _binary(s: frozenset) -> int:
    return sum(1 << i for i in s)


def finite_unions(X: FinSetSequence | Iterable[Iterable[int]], arity: int | None = None) -> list[frozenset]:
    """Unions of nonempty subfamilies of at most ``arity`` blocks, ordered by binary value."""
    if not isinstance(X, FinSetSequence):
        X = FinSetSequence(X)
    blocks = X.items
    r = len(blocks) if arity is None else min(arity, len(blocks))
    out = set()
    for size in range(1, r + 1):
        for combo in itertools.combinations(blocks, size):
            out.add(frozenset().union(*combo))
    return sorted(out, key=_binary)


# ---------------------------------------------------------------------------
# Classical words
# ---------------------------------------------------------------------------

def substitute(w: str, x: str) -> str:
    return w.replace(STAR, x)


def extracted_words(ws: VariableWordList | Sequence[str], max_blocks: int, alphabet: Alphabet,
                    mode: str = MODE_A) -> list[str]:
    """Concatenations ``w_{j0}[a0] ... w_{jn}[an]`` over at most ``max_blocks`` indices.

    Output is duplicate-free and sorted shortlex (shorter first, then by the
    canonical symbol order ``* < letters``).
    """
    ws = tuple(ws)
    if not ws:
        raise ValueError("need at least one variable word")
    symbols = _symbols(alphabet, mode)
    out = set()
    for size in range(1, min(max_blocks, len(ws)) + 1):
        for idxs in itertools.combinations(range(len(ws)), size):
            for letters in itertools.product(symbols, repeat=size):
                u = "".join(substitute(ws[j], a) for j, a in zip(idxs, letters))
                if mode == MODE_ASTAR and STAR not in u:
                    continue
                out.add(u)
    order = {s: i for i, s in enumerate((STAR,) + alphabet.letters)}
    return sorted(out, key=lambda u: (len(u), [order[c] for c in u]))


# ---------------------------------------------------------------------------
# Homogeneity
# ---------------------------------------------------------------------------

def is_homogeneous(f: Callable[[object], Hashable], S: Iterable) -> Hashable | None:
    """The common color of ``S`` under ``f``, or ``None`` if two colors occur.

    Raises ``EmptySet`` for an empty family, which is neither homogeneous nor
    inhomogeneous in any useful sense.
    """
    it = iter(S)
    try:
        first = f(next(it))
    except StopIteration:
        raise EmptySet("homogeneity of an empty family") from None
    for x in it:
        if f(x) != first:
            return None
    return first
