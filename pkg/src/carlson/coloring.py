"""Finite colorings of located words.

A ``Coloring`` is a table over every located word inside a window ``[0, N)``
(the empty word included), laid out by ``canonical_index``.  Because that
index is additive over disjoint unions, table lookups for unions and shifts
reduce to integer additions, which is what the search kernels exploit.

Symbolic rules make a coloring meaningful beyond its window: when a word
falls outside the table, the rule is evaluated directly.
"""

from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass
from typing import Callable, Hashable, Iterable

import numpy as np

from .core import STAR, Alphabet, LocatedWord, _Located, canonical_index
from .errors import WindowOverflow


def digit_matrix(k: int, n: int) -> np.ndarray:
    """``D[i, pos]`` = base-(k+1) digit of index ``i`` at ``pos`` for the window ``[0, n)``."""
    idx = np.arange((k + 1) ** n, dtype=np.int64)
    powers = (k + 1) ** np.arange(n, dtype=np.int64)
    return (idx[:, None] // powers[None, :]) % (k + 1)


@dataclass(frozen=True)
class Rule:
    """A named symbolic coloring rule with hashable parameters."""

    name: str
    params: tuple[tuple[str, object], ...] = ()

    @classmethod
    def make(cls, name: str, **params) -> "Rule":
        if name not in RULES:
            raise ValueError(f"unknown rule {name!r}; known: {sorted(RULES)}")
        return cls(name, tuple(sorted(params.items())))

    @property
    def kwargs(self) -> dict:
        return dict(self.params)

    def n_colors(self, alphabet: Alphabet) -> int:
        return RULES[self.name][2](alphabet, **self.kwargs)

    def on_word(self, p: _Located, alphabet: Alphabet) -> int:
        return RULES[self.name][0](p, alphabet, **self.kwargs)

    def on_digits(self, digits: np.ndarray, alphabet: Alphabet) -> np.ndarray:
        return RULES[self.name][1](digits, alphabet, **self.kwargs).astype(np.int64)

    def to_json(self) -> dict:
        return {"name": self.name, "params": self.kwargs}

    @classmethod
    def from_json(cls, data: dict) -> "Rule":
        return cls.make(data["name"], **data.get("params", {}))

    def __str__(self) -> str:
        args = ",".join(f"{k}={v}" for k, v in self.params)
        return f"{self.name}({args})"


def _positions(digits: np.ndarray) -> np.ndarray:
    return np.arange(digits.shape[1], dtype=np.int64)[None, :]


# name -> (word evaluator, vectorized evaluator, color count)
RULES: dict[str, tuple[Callable, Callable, Callable]] = {
    "constant": (
        lambda p, A, color=0: color,
        lambda D, A, color=0: np.full(D.shape[0], color),
        lambda A, color=0: color + 1,
    ),
    "size_mod": (
        lambda p, A, modulus=2, offset=0: (len(p) + offset) % modulus,
        lambda D, A, modulus=2, offset=0: ((D > 0).sum(axis=1) + offset) % modulus,
        lambda A, modulus=2, offset=0: modulus,
    ),
    "letter_count_mod": (
        lambda p, A, letter=None, modulus=2, offset=0: (p.count(letter or A.letters[0]) + offset) % modulus,
        lambda D, A, letter=None, modulus=2, offset=0: (
            (D == 1 + A.rank(letter or A.letters[0])).sum(axis=1) + offset) % modulus,
        lambda A, letter=None, modulus=2, offset=0: modulus,
    ),
    "contains_letter": (
        lambda p, A, letter=None: int(p.count(letter or A.letters[0]) > 0),
        lambda D, A, letter=None: (D == 1 + A.rank(letter or A.letters[0])).any(axis=1),
        lambda A, letter=None: 2,
    ),
    "letter_at": (
        lambda p, A, position=0, letter=None: int(p.get(position) == (letter or A.letters[0])),
        lambda D, A, position=0, letter=None: (
            D[:, position] == 1 + A.rank(letter or A.letters[0])
            if position < D.shape[1] else np.zeros(D.shape[0], dtype=bool)),
        lambda A, position=0, letter=None: 2,
    ),
    "position_sum_mod": (
        lambda p, A, modulus=2: sum(p.dom) % modulus,
        lambda D, A, modulus=2: ((D > 0) * _positions(D)).sum(axis=1) % modulus,
        lambda A, modulus=2: modulus,
    ),
    "single_word": (
        lambda p, A, word="{}": int(p.render() == word),
        lambda D, A, word="{}": _single_word_digits(D, A, word),
        lambda A, word="{}": 2,
    ),
}


def _single_word_digits(D: np.ndarray, A: Alphabet, word: str) -> np.ndarray:
    from .core import parse_word

    w = parse_word(word, A)
    if w.dom and w.max_pos >= D.shape[1]:
        return np.zeros(D.shape[0], dtype=bool)
    target = np.zeros(D.shape[1], dtype=np.int64)
    for pos, sym in w.entries:
        target[pos] = 1 + A.rank(sym)
    return (D == target[None, :]).all(axis=1)


def _window_of(k: int, size: int) -> int:
    n, total = 0, 1
    while total < size:
        total *= k + 1
        n += 1
    if total != size:
        raise ValueError(f"table length {size} is not a power of {k + 1}")
    return n


class Coloring:
    """A coloring of ``FIN_A(0, N)`` together with the empty word.

    ``table[canonical_index(p)]`` is the color of ``p``.  ``evaluator`` (a rule
    or a plain function returning palette values) extends the coloring past
    the window; without it, words outside the window raise ``WindowOverflow``.
    """

    def __init__(
        self,
        alphabet: Alphabet,
        n_colors: int,
        table,
        rule: Rule | None = None,
        palette: tuple | None = None,
        evaluator: Callable[[_Located], Hashable] | None = None,
    ):
        table = np.ascontiguousarray(np.asarray(table, dtype=np.int64))
        if table.ndim != 1:
            raise ValueError("coloring table must be one-dimensional")
        if n_colors < 1:
            raise ValueError("need at least one color")
        if table.size and (table.min() < 0 or table.max() >= n_colors):
            raise ValueError("color index out of range")
        self.alphabet = alphabet
        self.n_colors = int(n_colors)
        self.table = table
        self.table.setflags(write=False)
        self.window = _window_of(alphabet.k, table.size)
        self.rule = rule
        self.palette = tuple(palette) if palette is not None else None
        self._evaluator = evaluator
        self._wide: dict[int, np.ndarray] = {}

    # -- constructors ---------------------------------------------------------
    @classmethod
    def from_rule(cls, alphabet: Alphabet, rule: Rule, window: int, n_colors: int | None = None) -> "Coloring":
        table = rule.on_digits(digit_matrix(alphabet.k, window), alphabet)
        nc = n_colors if n_colors is not None else rule.n_colors(alphabet)
        return cls(alphabet, nc, table, rule=rule)

    @classmethod
    def from_function(cls, alphabet: Alphabet, fn: Callable[[LocatedWord], Hashable], window: int,
                      extend: bool = True) -> "Coloring":
        """Tabulate an arbitrary hashable-valued coloring.

        Non-negative integer values are used as colors directly, so two such
        colorings stay comparable.  Any other values become palette entries
        in order of first appearance along the canonical order.
        """
        from .core import word_from_index

        values = [fn(word_from_index(i, alphabet)) for i in range((alphabet.k + 1) ** window)]
        ev = fn if extend else None
        if all(type(v) is int and v >= 0 for v in values):
            return cls(alphabet, max(values) + 1, values, evaluator=ev)
        palette: dict[Hashable, int] = {}
        table = [palette.setdefault(v, len(palette)) for v in values]
        return cls(alphabet, max(1, len(palette)), table, palette=tuple(palette), evaluator=ev)

    @classmethod
    def constant(cls, alphabet: Alphabet, window: int, color: int = 0, n_colors: int | None = None) -> "Coloring":
        return cls.from_rule(alphabet, Rule.make("constant", color=color), window, n_colors)

    @classmethod
    def random(cls, alphabet: Alphabet, n_colors: int, window: int, rng: np.random.Generator) -> "Coloring":
        return cls(alphabet, n_colors, rng.integers(0, n_colors, size=(alphabet.k + 1) ** window))

    # -- evaluation -----------------------------------------------------------
    @property
    def k(self) -> int:
        return self.alphabet.k

    @property
    def unbounded(self) -> bool:
        return self.rule is not None or self._evaluator is not None

    def __call__(self, p: _Located) -> int:
        if not p.entries or p.entries[-1][0] < self.window:
            return int(self.table[canonical_index(p, self.alphabet)])
        if self.rule is not None:
            return int(self.rule.on_word(p, self.alphabet))
        if self._evaluator is not None:
            value = self._evaluator(p)
            if self.palette is None:
                if type(value) is int and 0 <= value < self.n_colors:
                    return value
            elif value in self.palette:
                return self.palette.index(value)
            raise WindowOverflow(f"value {value!r} at {p.render()} is outside the tabulated colors")
        raise WindowOverflow(f"{p.render()} lies outside the coloring window [0, {self.window})")

    def value(self, p: _Located) -> Hashable:
        """Color of ``p`` decoded through the palette (if any)."""
        c = self(p)
        return self.palette[c] if self.palette is not None else c

    def decode(self, c: int) -> Hashable:
        return self.palette[c] if self.palette is not None else c

    def table_upto(self, n: int) -> np.ndarray:
        """Table for the window ``[0, n)``, extending through the rule when needed."""
        if n <= self.window:
            return self.table[: (self.k + 1) ** n]
        if n in self._wide:
            return self._wide[n]
        if self.rule is not None:
            wide = self.rule.on_digits(digit_matrix(self.k, n), self.alphabet)
        elif self._evaluator is not None:
            from .core import word_from_index

            wide = np.array([self(word_from_index(i, self.alphabet)) for i in range((self.k + 1) ** n)],
                            dtype=np.int64)
        else:
            raise WindowOverflow(f"coloring has window {self.window}, {n} requested")
        wide.setflags(write=False)
        self._wide[n] = wide
        return wide

    def restrict(self, n: int) -> "Coloring":
        return Coloring(self.alphabet, self.n_colors, self.table_upto(n), rule=self.rule,
                        palette=self.palette, evaluator=self._evaluator)

    # -- identity -------------------------------------------------------------
    def content_hash(self) -> str:
        """Stable 64-bit digest of the canonical table (and the rule, when present)."""
        h = hashlib.blake2b(digest_size=8)
        h.update(b"carlson-coloring-v1\0")
        h.update(json.dumps({"alphabet": str(self.alphabet), "colors": self.n_colors,
                             "window": self.window,
                             "rule": self.rule.to_json() if self.rule else None},
                            sort_keys=True).encode())
        h.update(self.table.astype("<i8").tobytes())
        return h.hexdigest()

    def __repr__(self) -> str:
        extra = f", rule={self.rule}" if self.rule else ""
        return f"Coloring(alphabet={self.alphabet}, colors={self.n_colors}, window={self.window}{extra})"


def color_set(f: Callable[[_Located], Hashable], words: Iterable[_Located]) -> list:
    """Distinct colors taken on ``words`` in order of first appearance."""
    seen: dict = {}
    for w in words:
        seen.setdefault(f(w), None)
    return list(seen)


def shifted(f: Coloring, p: _Located, ell: int) -> Coloring:
    """The coloring ``q -> f(q | p)`` of the window ``[0, ell)`` (requires ``min dom p >= ell``)."""
    from .core import union, word_from_index

    if p.entries and p.entries[0][0] < ell:
        raise ValueError("shift word must lie past the window")
    table = [f(union(word_from_index(i, f.alphabet), p)) for i in range((f.k + 1) ** ell)]
    return Coloring(f.alphabet, f.n_colors, table)


__all__ = ["Coloring", "Rule", "RULES", "color_set", "digit_matrix", "shifted", "STAR"]
