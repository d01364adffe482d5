from __future__ import annotations

import pytest

from lambdacount.oracle import (
    Constraint,
    OracleCapExceeded,
    count_via_oracle,
    enumerate_terms,
    motzkin_words,
)
from lambdacount.sequences import catalan, motzkin_list
from lambdacount.terms import EnrichedTree


def test_motzkin_words_counted():
    m = motzkin_list(11)
    for n in range(1, 12):
        words = list(motzkin_words(n))
        assert len(words) == m[n] == len(set(words))


def test_spec_examples():
    assert list(enumerate_terms(2)) == [EnrichedTree((1, 0), (-1, 0))]
    assert count_via_oracle(5, Constraint.bci(1)) == 5
    assert count_via_oracle(4) == 4
    assert count_via_oracle(3) == 2
    assert count_via_oracle(4, Constraint.bck(1)) == 3
    for p in range(1, 6):
        assert count_via_oracle(2 * p, Constraint.bci(p)) == catalan(p - 1)


def test_cap_is_configurable():
    with pytest.raises(OracleCapExceeded):
        count_via_oracle(17)
    with pytest.raises(OracleCapExceeded):
        count_via_oracle(6, cap=5)
    assert count_via_oracle(5, cap=5) == 13
    with pytest.raises(ValueError):
        count_via_oracle(0)


def test_constraint_validation():
    with pytest.raises(ValueError):
        Constraint("bci")
    with pytest.raises(ValueError):
        Constraint("closed", 2)
    with pytest.raises(ValueError):
        Constraint("other")
    assert str(Constraint.bck(3)) == "bck(3)"


def test_every_tree_valid_and_unique():
    for n in range(1, 10):
        trees = list(enumerate_terms(n))
        assert len(trees) == len(set(trees))
        assert all(Constraint.closed().satisfied_by(t) for t in trees)


def test_deterministic_order():
    assert list(enumerate_terms(7)) == list(enumerate_terms(7))


def test_bci_structure():
    for p in (1, 2):
        for n in range(1, 12):
            for t in enumerate_terms(n, Constraint.bci(p)):
                leaves, unary, binary = t.counts()
                j = unary
                assert leaves == p * j and binary == p * j - 1 and n == (2 * p + 1) * j - 1
                assert all(c == p for c in t.pointer_counts().values())
            if (n + 1) % (2 * p + 1):
                assert count_via_oracle(n, Constraint.bci(p)) == 0


def test_refinement_chain():
    for n in range(1, 10):
        closed = set(enumerate_terms(n))
        for p in (1, 2, 3):
            bck = set(enumerate_terms(n, Constraint.bck(p)))
            bci = set(enumerate_terms(n, Constraint.bci(p)))
            assert bci <= bck <= closed
            assert bck == {t for t in closed if Constraint.bck(p).satisfied_by(t)}
            assert bci == {t for t in closed if Constraint.bci(p).satisfied_by(t)}
