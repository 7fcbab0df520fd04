import numpy as np
import pytest

from carlson.coloring import Coloring, Rule
from carlson.core import parse_word
from carlson.errors import BudgetExhausted, ExceedsBound
from carlson.hj import coloring_from_index, hj_counterexample, hj_number, hj_witness

import oracles as O
from conftest import AB, as_dict

# Produced by oracles.hj_number(2, 2, 3); re-derived in test_oracle_value.
V22 = 2


def test_oracle_value():
    assert O.hj_number(2, 2, 3) == V22
    assert O.hj_number(2, 1, 3) == 1


def test_hj_number_matches_oracle():
    assert hj_number(2, 2, 3) == V22
    assert hj_number(2, 1, 3) == 1
    assert hj_number(1, 3, 3) == 1


def test_hj_number_exceeds_bound():
    with pytest.raises(ExceedsBound):
        hj_number(2, 2, V22 - 1)


def test_hj_number_budget():
    with pytest.raises(BudgetExhausted):
        hj_number(3, 2, 3)


def test_counterexample_at_one():
    ci = hj_counterexample(2, 2, 1)
    assert ci is not None
    f = coloring_from_index(2, 2, 1, ci)
    assert hj_witness(f) is None
    assert O.has_line(lambda w: f.table[O.index_of(w, "ab")], "ab", 1) is None
    assert hj_counterexample(2, 2, 2) is None


def test_witness_examples(parity, const0):
    assert hj_witness(const0, 1).p == parse_word("{0:*}")
    assert hj_witness(parity, 1).p == parse_word("{0:*}")
    f = Coloring.from_rule(AB, Rule.make("letter_at", position=0, letter="a"), 2)
    wit = hj_witness(f)
    assert wit.p == parse_word("{1:*}")
    assert wit.color == 0


def test_witness_accept_filter(parity):
    wit = hj_witness(parity, 3, accept=lambda c: c == 0)
    assert wit.color == 0
    assert len(wit.p) % 2 == 0


def test_random_witnesses_match_oracle():
    rng = np.random.default_rng(7)
    for _ in range(100):
        f = Coloring.random(AB, 2, 2, rng)
        wit = hj_witness(f)
        col = lambda w: int(f.table[O.index_of(w, "ab")])  # noqa: E731
        want = O.has_line(col, "ab", 2)
        assert wit is not None and want is not None
        assert len({col(O.inst(as_dict(wit.p), a)) for a in "ab"}) == 1


def test_monotone_in_window():
    rng = np.random.default_rng(1)
    for _ in range(20):
        f = Coloring.random(AB, 3, 4, rng)
        small = hj_witness(f, 2)
        if small is not None:
            assert hj_witness(f, 4) is not None


def test_threads_do_not_change_answer():
    a = hj_counterexample(2, 2, 1, threads=1)
    b = hj_counterexample(2, 2, 1, threads=4)
    assert a == b
    assert hj_number(2, 2, 3, threads=1) == hj_number(2, 2, 3, threads=8)
