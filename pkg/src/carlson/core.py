"""Located words and located variable words.

A located word is a finite partial map from naturals to letters.  Two of them
can be joined when one lies entirely to the left of the other, which makes
the collection a partial semigroup.  Variable words additionally carry the
symbol ``*`` at one or more positions; instantiating the variable replaces
every ``*`` by the same letter.

The empty word is admitted as an explicit unit (``LocatedWord({})``), so that
colorings can be evaluated at the empty word and shifts by the empty word are
the identity.
"""

from __future__ import annotations

import enum
import itertools
import re
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable, Iterator, Mapping, Sequence

from .errors import (
    EmptyOperand,
    NotSeparated,
    OutOfWindow,
    ParseError,
    UnknownSymbol,
)

STAR = "*"
_RESERVED = set("{}:, \t\n") | {STAR}


@dataclass(frozen=True)
class Alphabet:
    """Ordered set of single-character letters. Declaration order is the letter order."""

    letters: tuple[str, ...]

    def __init__(self, letters: str | Sequence[str]):
        letters = tuple(letters)
        if not letters:
            raise ValueError("alphabet must contain at least one letter")
        if len(set(letters)) != len(letters):
            raise ValueError(f"duplicate letters in {letters!r}")
        for a in letters:
            if not isinstance(a, str) or len(a) != 1 or a in _RESERVED:
                raise ValueError(f"invalid letter {a!r}")
        object.__setattr__(self, "letters", letters)

    @property
    def k(self) -> int:
        return len(self.letters)

    @property
    def star(self) -> str:
        return STAR

    @property
    def symbols(self) -> tuple[str, ...]:
        """Letters followed by the variable, in canonical order of the extended alphabet."""
        return (STAR,) + self.letters

    def rank(self, letter: str) -> int:
        try:
            return self.letters.index(letter)
        except ValueError:
            raise UnknownSymbol(f"{letter!r} is not a letter of {''.join(self.letters)!r}") from None

    def digit(self, symbol: str) -> int:
        """Digit of ``symbol`` in the extended canonical order: 0 absent, 1 star, 2+rank letter."""
        if symbol == STAR:
            return 1
        return 2 + self.rank(symbol)

    def check(self, symbol: str, allow_star: bool = True) -> None:
        if symbol == STAR and allow_star:
            return
        if symbol not in self.letters:
            raise UnknownSymbol(f"{symbol!r} not in alphabet {''.join(self.letters)!r}")

    def __str__(self) -> str:
        return "".join(self.letters)


def _normalize(entries) -> tuple[tuple[int, str], ...]:
    if isinstance(entries, Mapping):
        pairs = entries.items()
    else:
        pairs = entries
    out = []
    for pos, sym in pairs:
        if isinstance(pos, bool) or not isinstance(pos, int) or pos < 0:
            raise ValueError(f"positions must be naturals, got {pos!r}")
        if not isinstance(sym, str) or len(sym) != 1:
            raise ValueError(f"symbols must be single characters, got {sym!r}")
        out.append((pos, sym))
    out.sort()
    for (p0, _), (p1, _) in zip(out, out[1:]):
        if p0 == p1:
            raise ValueError(f"position {p0} given twice")
    return tuple(out)


class _Located:
    __slots__ = ("entries", "_hash")

    def __init__(self, entries=()):
        self.entries = _normalize(entries)
        self._hash = hash(self.entries)
        self._validate()

    def _validate(self) -> None:  # pragma: no cover - overridden
        pass

    @classmethod
    def _trusted(cls, entries: tuple[tuple[int, str], ...]):
        obj = cls.__new__(cls)
        obj.entries = entries
        obj._hash = hash(entries)
        return obj

    # -- mapping-ish access ------------------------------------------------
    @property
    def dom(self) -> tuple[int, ...]:
        return tuple(pos for pos, _ in self.entries)

    @property
    def is_empty(self) -> bool:
        return not self.entries

    @property
    def min_pos(self) -> int:
        if not self.entries:
            raise EmptyOperand("the empty word has no minimum position")
        return self.entries[0][0]

    @property
    def max_pos(self) -> int:
        if not self.entries:
            raise EmptyOperand("the empty word has no maximum position")
        return self.entries[-1][0]

    def __len__(self) -> int:
        return len(self.entries)

    def __iter__(self) -> Iterator[tuple[int, str]]:
        return iter(self.entries)

    def get(self, pos: int, default=None):
        for p, s in self.entries:
            if p == pos:
                return s
        return default

    def as_dict(self) -> dict[int, str]:
        return dict(self.entries)

    def symbols(self) -> set[str]:
        return {s for _, s in self.entries}

    def count(self, symbol: str) -> int:
        return sum(1 for _, s in self.entries if s == symbol)

    # -- order and algebra -------------------------------------------------
    def precedes(self, other: "_Located") -> bool:
        return precedes(self, other)

    def __or__(self, other: "_Located"):
        return union(self, other)

    def shift(self, offset: int):
        """Translate every position by ``offset`` (the canonical map onto FIN(offset, inf))."""
        if offset < 0 and self.entries and self.entries[0][0] + offset < 0:
            raise ValueError("shift would produce a negative position")
        return type(self)._trusted(tuple((p + offset, s) for p, s in self.entries))

    def __eq__(self, other) -> bool:
        if not isinstance(other, _Located):
            return NotImplemented
        return self.entries == other.entries

    def __hash__(self) -> int:
        return self._hash

    def render(self) -> str:
        return "{" + ",".join(f"{p}:{s}" for p, s in self.entries) + "}"

    def __str__(self) -> str:
        return self.render()

    def __repr__(self) -> str:
        return f"{type(self).__name__}({self.render()})"

    def __reduce__(self):
        return (type(self), (self.entries,))


class LocatedWord(_Located):
    """A located word over the letters; the empty map is the unit."""

    __slots__ = ()

    def _validate(self) -> None:
        if any(s == STAR for _, s in self.entries):
            raise ValueError("a located word cannot contain the variable; use LocatedVariableWord")


class LocatedVariableWord(_Located):
    """A nonempty located word over letters and ``*`` in which ``*`` occurs."""

    __slots__ = ()

    def _validate(self) -> None:
        if not any(s == STAR for _, s in self.entries):
            raise ValueError("a located variable word needs at least one '*'")

    @property
    def star_positions(self) -> tuple[int, ...]:
        return tuple(p for p, s in self.entries if s == STAR)

    def instantiate(self, x: str):
        """``p[x]``: replace every star by ``x``. ``p[*]`` is ``p`` itself."""
        if x == STAR:
            return self
        return LocatedWord._trusted(tuple((p, x if s == STAR else s) for p, s in self.entries))

    __getitem__ = instantiate


EMPTY = LocatedWord(())


class Kind(enum.Enum):
    UNIT = "unit"
    WORD = "word"
    VARIABLE_WORD = "variable_word"


def classify(entries, alphabet: Alphabet | None = None) -> Kind:
    """Sort a raw entry map into unit / word / variable word."""
    if isinstance(entries, _Located):
        entries = entries.entries
    entries = _normalize(entries)
    if alphabet is not None:
        for _, s in entries:
            alphabet.check(s)
    if not entries:
        return Kind.UNIT
    if any(s == STAR for _, s in entries):
        return Kind.VARIABLE_WORD
    return Kind.WORD


def make_word(entries) -> LocatedWord | LocatedVariableWord:
    """Build the right class for ``entries``: a variable word iff ``*`` occurs."""
    entries = _normalize(entries)
    if any(s == STAR for _, s in entries):
        return LocatedVariableWord._trusted(entries)
    return LocatedWord._trusted(entries)


def instantiate(p: _Located, x: str, alphabet: Alphabet) -> _Located:
    alphabet.check(x)
    for _, s in p.entries:
        alphabet.check(s)
    if isinstance(p, LocatedVariableWord):
        return p.instantiate(x)
    return p


def precedes(p: _Located, q: _Located) -> bool:
    """``max dom p < min dom q``."""
    if p.is_empty or q.is_empty:
        raise EmptyOperand("precedes is only defined on nonempty words")
    return p.entries[-1][0] < q.entries[0][0]


def union(p: _Located, q: _Located) -> LocatedWord | LocatedVariableWord:
    """Disjoint union of two separated words; the empty word is neutral."""
    if p.is_empty:
        return q
    if q.is_empty:
        return p
    if p.entries[-1][0] < q.entries[0][0]:
        entries = p.entries + q.entries
    elif q.entries[-1][0] < p.entries[0][0]:
        entries = q.entries + p.entries
    else:
        raise NotSeparated(f"{p.render()} and {q.render()} are not separated")
    if isinstance(p, LocatedVariableWord) or isinstance(q, LocatedVariableWord):
        return LocatedVariableWord._trusted(entries)
    return LocatedWord._trusted(entries)


def union_all(words: Iterable[_Located]) -> LocatedWord | LocatedVariableWord:
    """Union of a pairwise separated family, in any order."""
    out: _Located = EMPTY
    for w in sorted((w for w in words if not w.is_empty), key=lambda w: w.min_pos):
        out = union(out, w)
    return out


# ---------------------------------------------------------------------------
# Canonical indexing
# ---------------------------------------------------------------------------

def canonical_index(p: _Located, alphabet: Alphabet, n: int | None = None) -> int:
    """Mixed-radix index of a located word: digit 0 if absent, 1+rank otherwise, base k+1.

    The index is additive over disjoint unions, and a word lies in the window
    ``[0, n)`` exactly when its index is below ``(k+1)**n``.
    """
    base = alphabet.k + 1
    idx = 0
    for pos, sym in p.entries:
        if sym == STAR:
            raise UnknownSymbol("canonical_index is defined on located words; use sort_key for variable words")
        if n is not None and pos >= n:
            raise OutOfWindow(f"position {pos} outside window [0, {n})")
        idx += (1 + alphabet.rank(sym)) * base ** pos
    return idx


def word_from_index(idx: int, alphabet: Alphabet, n: int | None = None) -> LocatedWord:
    base = alphabet.k + 1
    if idx < 0 or (n is not None and idx >= base ** n):
        raise OutOfWindow(f"index {idx} outside window of size {n}")
    entries = []
    pos = 0
    while idx:
        idx, d = divmod(idx, base)
        if d:
            entries.append((pos, alphabet.letters[d - 1]))
        pos += 1
    return LocatedWord._trusted(tuple(entries))


def sort_key(p: _Located, alphabet: Alphabet) -> int:
    """Canonical order over words and variable words alike.

    Digits are compared from the highest position down; absent < ``*`` < letters
    in declaration order.  Restricted to plain words this is the order of
    ``canonical_index``.
    """
    base = alphabet.k + 2
    return sum(alphabet.digit(s) * base ** pos for pos, s in p.entries)


def star_encoding(p: _Located, alphabet: Alphabet) -> tuple[int, int]:
    """``(fixed, star)`` with ``canonical_index(p[a]) == fixed + (1 + rank(a)) * star``."""
    base = alphabet.k + 1
    fixed = star = 0
    for pos, sym in p.entries:
        if sym == STAR:
            star += base ** pos
        else:
            fixed += (1 + alphabet.rank(sym)) * base ** pos
    return fixed, star


def words_in_window(alphabet: Alphabet, n: int, include_empty: bool = True) -> list[LocatedWord]:
    """All located words with domain inside ``[0, n)``, in canonical order."""
    start = 0 if include_empty else 1
    return [word_from_index(i, alphabet) for i in range(start, (alphabet.k + 1) ** n)]


def words_between(alphabet: Alphabet, lo: int, hi: int, include_empty: bool = False) -> list[LocatedWord]:
    """Located words with domain inside ``[lo, hi)`` in canonical order (FIN_A(lo, hi))."""
    if hi <= lo:
        return [EMPTY] if include_empty else []
    return [w.shift(lo) for w in words_in_window(alphabet, hi - lo, include_empty)]


@lru_cache(maxsize=64)
def _variable_words_cached(letters: tuple[str, ...], n: int) -> tuple[LocatedVariableWord, ...]:
    syms = (None, STAR) + letters
    out = []
    # product over positions n-1 .. 0 in digit order yields the canonical order
    for combo in itertools.product(syms, repeat=n):
        if STAR not in combo:
            continue
        entries = tuple((n - 1 - j, s) for j, s in reversed(list(enumerate(combo))) if s is not None)
        out.append(LocatedVariableWord._trusted(entries))
    return tuple(out)


def variable_words_in_window(alphabet: Alphabet, n: int) -> list[LocatedVariableWord]:
    """All located variable words with domain inside ``[0, n)``, in canonical order."""
    return list(_variable_words_cached(alphabet.letters, n))


def variable_words_between(alphabet: Alphabet, lo: int, hi: int) -> list[LocatedVariableWord]:
    if hi <= lo:
        return []
    return [w.shift(lo) for w in _variable_words_cached(alphabet.letters, hi - lo)]


# ---------------------------------------------------------------------------
# Text form
# ---------------------------------------------------------------------------

_WORD_RE = re.compile(r"^\{\s*(.*?)\s*\}$")


def parse_word(text: str, alphabet: Alphabet | None = None) -> LocatedWord | LocatedVariableWord:
    """Inverse of ``render``: ``"{0:a,2:*}"``."""
    m = _WORD_RE.match(text.strip())
    if not m:
        raise ParseError(f"not a located word: {text!r}")
    body = m.group(1)
    entries = []
    if body:
        for item in body.split(","):
            try:
                pos, sym = item.split(":")
                entries.append((int(pos.strip()), sym.strip()))
            except ValueError:
                raise ParseError(f"bad entry {item!r} in {text!r}") from None
    if alphabet is not None:
        for _, s in entries:
            alphabet.check(s)
    try:
        return make_word(entries)
    except ValueError as exc:
        raise ParseError(str(exc)) from None


def parse_words(text: str, alphabet: Alphabet | None = None) -> list:
    """Parse a comma/space separated list such as ``"{0:*},{1:*}"``."""
    return [parse_word(chunk, alphabet) for chunk in re.findall(r"\{[^}]*\}", text)]


@dataclass(frozen=True)
class Window:
    """Truncation parameters under which an infinite notion is finitized."""

    n: int
    arity: int | None = None
    budget: int | None = None

    def to_json(self) -> dict:
        return {"n": self.n, "arity": self.arity, "budget": self.budget}

    @classmethod
    def from_json(cls, data: Mapping) -> "Window":
        return cls(int(data["n"]), data.get("arity"), data.get("budget"))
