import itertools
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, strategies as st

from tracecode.applications import (
    ab_ratio,
    build_omega,
    lsss_preconditions,
    minimal_codewords_exhaustive,
    non_minimal_count,
    projective_labels,
    projective_representatives,
    representation_counts,
    representation_counts_pairs,
    sum_set_check,
    sumset_pipeline,
)
from tracecode.codes import WeightDistribution, all_codewords
from tracecode.errors import BudgetExceeded, EmptyCode, NotASumSet, NotProjective, NotThreeWeight, TooLarge

from conftest import a_by_regime, elements_outside_prime_field, field


def naive_non_minimal(words, p):
    words = [tuple(int(v) % p for v in w) for w in words if any(w)]
    supp = [frozenset(i for i, v in enumerate(w) if v) for w in words]

    def proportional(u, v):
        return any(tuple(c * x % p for x in u) == v for c in range(1, p))

    bad = 0
    for i, w in enumerate(words):
        if any(supp[j] <= supp[i] and not proportional(words[j], w) for j in range(len(words)) if j != i):
            bad += 1
    return bad


@pytest.mark.parametrize("p,m", [(3, 3), (3, 4), (5, 3)])
def test_non_minimal_count_matches_naive(p, m):
    ctx = field(p, m)
    for a in elements_outside_prime_field(ctx, 2):
        words = all_codewords(ctx, a)
        assert non_minimal_count(words, p) == naive_non_minimal(words, p)


def test_non_minimal_on_handmade_code():
    # the span of 1100 and 0011 over F_3: 1111 covers both generators
    g = np.array([[1, 1, 0, 0], [0, 0, 1, 1]])
    words = np.array([np.array(c) @ g % 3 for c in itertools.product(range(3), repeat=2)])
    assert non_minimal_count(words, 3) == naive_non_minimal(words, 3) == 4


@given(st.lists(st.lists(st.integers(0, 4), min_size=3, max_size=3), min_size=1, max_size=12))
def test_projective_labels(rows):
    words = np.array(rows)
    labels = projective_labels(words, 5)
    for i, j in itertools.combinations(range(len(rows)), 2):
        same = any(tuple(c * x % 5 for x in rows[i]) == tuple(rows[j]) for c in range(1, 5))
        assert (labels[i] == labels[j]) == same


@given(st.integers(1, 500), st.integers(1, 500), st.sampled_from([3, 5, 7]))
def test_ab_ratio_is_exact(lo, span, p):
    hi = lo + span
    wd = WeightDistribution({0: 1, lo: 2, hi: 3}, hi, 1)
    res = ab_ratio(wd, p)
    assert res.passes == (Fraction(lo, hi) > Fraction(p - 1, p))
    assert res.ratio == Fraction(lo, hi)


def test_ab_ratio_needs_weights():
    with pytest.raises(EmptyCode):
        ab_ratio(WeightDistribution({0: 1}, 4, 0), 3)


def test_minimality_report_and_bound():
    ctx = field(3, 5)
    rep = minimal_codewords_exhaustive(ctx, ctx.beta)
    assert (rep.w_min, rep.w_max) == (15, 21)
    assert rep.ab_ratio_passes and rep.non_minimal_count == 0
    with pytest.raises(TooLarge):
        minimal_codewords_exhaustive(field(3, 6), field(3, 6).beta, bound=243)


def brute_counts(omega, s, p, m):
    counts = np.zeros(p**m, dtype=np.int64)
    for combo in itertools.product(omega, repeat=s):
        h = [sum(col) % p for col in zip(*combo)]
        counts[sum(v * p**i for i, v in enumerate(h))] += 1
    return counts


@given(st.sets(st.tuples(st.integers(0, 2), st.integers(0, 2), st.integers(0, 2)), min_size=1, max_size=8))
def test_representation_counts(vecs):
    omega = sorted(vecs)
    want = brute_counts(omega, 3, 3, 3)
    assert np.array_equal(representation_counts(omega, 3, 3, 3), want)
    assert np.array_equal(representation_counts_pairs(omega, 3, 3), want)


def test_representation_counts_five_fold():
    omega = [(1, 0), (2, 0), (0, 1), (0, 2)]
    assert list(representation_counts(omega, 5, 3, 2)) == list(brute_counts(omega, 5, 3, 2))
    with pytest.raises(BudgetExceeded):
        representation_counts(omega, 5, 3, 2, budget=10)


def test_sum_set_on_whole_space_minus_zero():
    # F_3^2 minus 0 is scalar-stable, and translation invariance makes every count equal off 0
    omega = [v for v in itertools.product(range(3), repeat=2) if any(v)]
    rep = sum_set_check(omega, 3, 3, 2)
    assert rep.is_sum_set and rep.sigma1 is None
    assert rep.sigma0 == brute_counts(omega, 3, 3, 2)[1]


def test_sum_set_rejections():
    with pytest.raises(NotASumSet):
        sum_set_check([(1, 0)], 3, 3, 2)
    rep = sum_set_check([(1, 0)], 3, 3, 2, strict=False)
    assert not rep.is_sum_set
    with pytest.raises(NotASumSet):
        sum_set_check([(0, 0, 1), (0, 0, 2), (0, 1, 0), (0, 2, 0)], 3, 3, 3)
    with pytest.raises(ValueError):
        sum_set_check([(1, 0), (2, 0)], 2, 3, 2)


def test_lsss_preconditions():
    assert lsss_preconditions(WeightDistribution({0: 1, 15: 60, 18: 116, 21: 66}, 27, 5), 27, 3)
    assert not lsss_preconditions(WeightDistribution({0: 1, 15: 60, 18: 116, 24: 66}, 27, 5), 27, 3)
    with pytest.raises(NotThreeWeight):
        lsss_preconditions(WeightDistribution({0: 1, 15: 60, 18: 182}, 27, 5), 27, 3)


def test_omega_needs_projective_code():
    ctx = field(3, 6)
    a, _ = a_by_regime(ctx, 1)["C3_sDivHalfM"][0]
    with pytest.raises(NotProjective):
        build_omega(ctx, a)


def test_pipeline_at_small_odd_field():
    ctx = field(3, 5)
    a = ctx.beta
    omega = build_omega(ctx, a)
    assert len(omega) == 2 * 27
    assert len(projective_representatives(omega, 3)) == 27
    rep = sumset_pipeline(ctx, a)
    assert rep.is_sum_set and rep.lsss_preconditions
    pairs = sum_set_check(omega, 3, 3, 5, method="pairs")
    assert (pairs.sigma0, pairs.sigma1) == (rep.sigma0, rep.sigma1)
