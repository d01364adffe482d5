from __future__ import annotations

from collections import Counter

import pytest
from scipy.stats import chisquare

from lambdacount.oracle import Constraint, enumerate_terms
from lambdacount.sampler import (
    SamplerState,
    composition_weight,
    path_count,
    rank_closed,
    sample_bci,
    sample_closed,
    unrank_bci,
    unrank_closed,
)
from lambdacount.sequences import alpha, phi_list
from lambdacount.terms import Abs, Var, is_closed, size, to_debruijn


def test_unrank_small():
    assert unrank_closed(2, 0) == Abs(Var(1))
    a, b = unrank_closed(3, 0), unrank_closed(3, 1)
    assert a != b and {a, b} == {Abs(Abs(Var(1))), Abs(Abs(Var(2)))}
    with pytest.raises(ValueError):
        unrank_closed(3, 2)
    with pytest.raises(ValueError):
        unrank_closed(1, 0)


def test_unrank_size5_is_the_oracle_set():
    terms = [unrank_closed(5, r) for r in range(13)]
    assert len(set(terms)) == 13
    assert set(terms) == {to_debruijn(t) for t in enumerate_terms(5)}


def test_rank_roundtrip_all_upto_9():
    for n in range(2, 10):
        for t in enumerate_terms(n):
            db = to_debruijn(t)
            assert unrank_closed(n, rank_closed(db)) == db


def test_sampler_determinism_and_validity():
    a = [sample_closed(12, SamplerState(7)) for _ in range(1)]
    s1, s2 = SamplerState(7), SamplerState(7)
    xs = [sample_closed(12, s1) for _ in range(50)]
    ys = [sample_closed(12, s2) for _ in range(50)]
    assert xs == ys and xs[0] == a[0]
    assert all(size(t) == 12 and is_closed(t) for t in xs)
    with pytest.raises(ValueError):
        sample_closed(1, SamplerState(0))
    with pytest.raises(ValueError):
        SamplerState(-1)
    assert sample_closed(2, SamplerState(3)) == Abs(Var(1))


def test_unbiased_big_range():
    s = SamplerState(1)
    big = 10**40
    assert all(0 <= s.below(big) < big for _ in range(100))


def test_decoration_weights():
    from math import comb

    assert [path_count(i) for i in range(6)] == [comb(2 * i, i) for i in range(6)]
    for p in range(1, 8):
        for m in range(1, p + 1):
            assert composition_weight(m, p) == alpha(m, p)


@pytest.mark.parametrize("p,n", [(1, 2), (1, 5), (1, 8), (1, 11), (2, 4), (2, 9), (3, 6), (3, 13)])
def test_unrank_bci_is_a_bijection_onto_oracle(p, n):
    j = (n + 1) // (2 * p + 1)
    total = phi_list(p, j)[j]
    terms = [unrank_bci(p, n, r) for r in range(total)]
    assert len(set(terms)) == total
    assert set(terms) == set(enumerate_terms(n, Constraint.bci(p)))


def test_sample_bci_errors():
    with pytest.raises(ValueError):
        sample_bci(1, 4, SamplerState(0))
    with pytest.raises(ValueError):
        unrank_bci(1, 5, 5)
    t = sample_bci(1, 2, SamplerState(0))
    assert to_debruijn(t) == Abs(Var(1))


def test_sampled_bci_terms_valid():
    s = SamplerState(5)
    for _ in range(200):
        t = sample_bci(2, 14, s)
        assert t.size == 14 and Constraint.bci(2).satisfied_by(t)


@pytest.mark.slow
def test_chi_square_bci2_size9():
    s = SamplerState(2024)
    support = sorted(set(enumerate_terms(9, Constraint.bci(2))), key=repr)
    counts = Counter(sample_bci(2, 9, s) for _ in range(100_000))
    assert set(counts) <= set(support)
    obs = [counts[t] for t in support]
    assert chisquare(obs).pvalue > 0.001
