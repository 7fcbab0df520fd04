"""Desk-scale combinatorics of located words: spans, Hales-Jewett and Carlson
searches with verifiable certificates, and finite-window dynamics of colorings."""

from .coloring import Coloring, Rule, shifted
from .core import (
    EMPTY,
    STAR,
    Alphabet,
    LocatedVariableWord,
    LocatedWord,
    Window,
    canonical_index,
    instantiate,
    make_word,
    parse_word,
    parse_words,
    union,
    word_from_index,
)
from . import errors
from .errors import *  # noqa: F403
from .spans import BlockSequence, FinSetSequence, WeakBlockSequence, iter_span, span_located, weak_span

__version__ = "0.1.0"

__all__ = [
    "Alphabet", "BlockSequence", "Coloring", "EMPTY", "FinSetSequence", "LocatedVariableWord", "LocatedWord",
    "Rule", "STAR", "WeakBlockSequence", "Window", "canonical_index", "instantiate", "iter_span", "make_word",
    "parse_word", "parse_words", "shifted", "span_located", "union", "weak_span", "word_from_index",
    *errors.__all__,
]
