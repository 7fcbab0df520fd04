import itertools
import types

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from carlson.core import EMPTY, Alphabet, LocatedVariableWord, canonical_index, parse_word, parse_words, sort_key
from carlson.errors import EmptySet
from carlson.spans import (
    MODE_A,
    MODE_ASTAR,
    BlockSequence,
    FinSetSequence,
    VariableWordList,
    WeakBlockSequence,
    extracted_words,
    finite_sums,
    finite_unions,
    is_homogeneous,
    iter_span,
    span_located,
    span_with_empty,
    weak_span,
)

import oracles as O
from conftest import AB, as_dict

w = lambda s: parse_word(s, AB)  # noqa: E731


def bs(text):
    return BlockSequence(parse_words(text, AB))


def test_span_examples():
    X = bs("{0:*},{1:*}")
    assert len(span_located(X, AB)) == 8
    assert span_located(bs("{0:*}"), AB) == [w("{0:a}"), w("{0:b}")]
    assert len(span_located(X, AB, MODE_A, 1)) == 4
    assert span_with_empty(bs("{0:*}"), AB)[0] == EMPTY


def test_span_is_lazy():
    gen = iter_span(bs(",".join("{%d:*}" % i for i in range(30))), AB)
    assert isinstance(gen, types.GeneratorType)
    assert next(gen) == w("{0:a}")


@pytest.mark.parametrize("k", [1, 2, 3])
@pytest.mark.parametrize("n", [1, 2, 3, 4])
def test_all_star_span_size(k, n):
    A = Alphabet("abc"[:k])
    X = BlockSequence(LocatedVariableWord([(i, "*")]) for i in range(n))
    assert len(span_located(X, A)) == (k + 1) ** n - 1


def test_block_sequence_validation():
    with pytest.raises(ValueError):
        bs("{1:*},{0:*}")
    with pytest.raises(TypeError):
        BlockSequence([w("{0:a}")])
    with pytest.raises(TypeError):
        WeakBlockSequence([w("{0:*}")])
    with pytest.raises(ValueError):
        FinSetSequence([{0, 2}, {1}])
    with pytest.raises(ValueError):
        VariableWordList(["ab"])


@st.composite
def block_sequences(draw, max_blocks=3):
    n = draw(st.integers(1, max_blocks))
    blocks, pos = [], 0
    for _ in range(n):
        length = draw(st.integers(1, 2))
        syms = [draw(st.sampled_from("ab*")) for _ in range(length)]
        syms[draw(st.integers(0, length - 1))] = "*"
        pos += draw(st.integers(0, 1))
        blocks.append(LocatedVariableWord([(pos + i, s) for i, s in enumerate(syms)]))
        pos += length
    return BlockSequence(blocks)


@settings(max_examples=60)
@given(block_sequences(), st.sampled_from([None, 1, 2]))
def test_span_matches_oracle(X, arity):
    dX = [as_dict(b) for b in X]
    got = span_located(X, AB, MODE_A, arity)
    assert len(got) == len(set(got))
    assert {O.key(as_dict(p)) for p in got} == {O.key(d) for d in O.span(dX, "ab", arity)}
    idx = [canonical_index(p, AB) for p in got]
    assert idx == sorted(idx)
    vgot = span_located(X, AB, MODE_ASTAR, arity)
    assert {O.key(as_dict(p)) for p in vgot} == {O.key(d) for d in O.span(dX, "ab", arity, star=True)}
    keys = [sort_key(p, AB) for p in vgot]
    assert keys == sorted(keys)


@settings(max_examples=40)
@given(block_sequences())
def test_star_span_is_extended_span_intersected(X):
    # [X]_{A*} = [X]_{A u {*}} restricted to variable words
    ext = Alphabet("ab")
    dX = [as_dict(b) for b in X]
    both = O.span(dX, "ab*")
    want = {O.key(d) for d in both if "*" in d.values()}
    assert {O.key(as_dict(p)) for p in iter_span(X, ext, MODE_ASTAR)} == want


def test_weak_span():
    X = WeakBlockSequence(parse_words("{0:a},{1:b},{2:a}", AB))
    assert len(weak_span(X, 2)) == 6
    assert len(weak_span(X)) == 7


def test_finite_sums():
    assert finite_sums({1, 2}) == {1, 2, 3}
    assert finite_sums({1, 2, 4}) == set(range(1, 8))
    assert finite_sums({1, 2, 4}, 2) == {1, 2, 3, 4, 5, 6}


def test_finite_unions():
    assert finite_unions([{0}, {1}]) == [{0}, {1}, {0, 1}]
    assert finite_unions([{0, 1}, {3}]) == [{0, 1}, {3}, {0, 1, 3}]
    assert len(finite_unions([{0}, {1}, {2}], 2)) == 6


@pytest.mark.parametrize("E", [{0}, {0, 2}, {1, 3, 4}, {0, 1, 2, 3}])
def test_sums_of_powers_match_unions(E):
    sums = finite_sums({2**i for i in E})
    unions = finite_unions([{i} for i in sorted(E)])
    assert sums == {sum(2**i for i in U) for U in unions}


def test_extracted_words():
    assert extracted_words(["*"], 1, AB) == ["a", "b"]
    assert extracted_words(["*", "**"], 2, Alphabet("a")) == ["a", "aa", "aaa"]
    assert extracted_words(["*"], 1, AB, MODE_ASTAR) == ["*"]


def test_is_homogeneous(parity, const0):
    assert is_homogeneous(const0, [w("{0:a}"), w("{1:b,2:a}")]) == 0
    assert is_homogeneous(parity, [w("{0:a}"), w("{1:b}")]) == 1
    assert is_homogeneous(parity, [w("{0:a}"), w("{0:a,1:b}")]) is None
    with pytest.raises(EmptySet):
        is_homogeneous(parity, [])


def test_slices_keep_type():
    X = bs("{0:*},{1:*},{2:*}")
    assert isinstance(X[1:], BlockSequence)
    assert X.after(0) == X[1:]
    assert X.past(2) == X[2:]
    assert list(itertools.islice(iter(X), 1)) == [w("{0:*}")]
