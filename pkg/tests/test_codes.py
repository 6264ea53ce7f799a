import io
import itertools
from collections import Counter

import numpy as np
import pytest
import sympy
from hypothesis import given, strategies as st

import tracecode.codes as codes
from tracecode.codes import (
    CompleteWeightEnumerator,
    WeightDistribution,
    all_codewords,
    codeword,
    defining_set,
    dual_low_weights_columns,
    dual_low_weights_moments,
    dual_min_distance_upto3,
    dump_codewords,
    enumerate_code,
    full_space_distribution,
    generator_matrix,
    min_distance,
    rank_mod_p,
    weight,
)
from tracecode.errors import (
    AInPrimeField,
    DegreeTooSmall,
    DimensionMismatch,
    EmptyCode,
    InconsistentMoments,
    NotABasis,
    TooLarge,
)
from tracecode.field import enumerate_elements, trace

from conftest import elements_outside_prime_field, field


def naive_code(ctx, a):
    """Every codeword by scalar field arithmetic, no tables."""
    D = [x for x in enumerate_elements(ctx) if trace(ctx, x) == 1 and trace(ctx, a * x) == 0]
    return D, [[trace(ctx, b * d * d) for d in D] for b in enumerate_elements(ctx)]


@pytest.mark.parametrize("p,m", [(3, 3), (3, 4), (5, 3)])
def test_enumeration_matches_naive(p, m):
    ctx = field(p, m)
    for a in elements_outside_prime_field(ctx, 3):
        D, words = naive_code(ctx, a)
        ds = defining_set(ctx, a)
        assert [x.index for x in D] == list(ds.indices)
        assert ds.n == len(D) == p ** (m - 2)
        wd, cwe = enumerate_code(ctx, a)
        want = Counter(tuple(w.count(v) for v in range(p)) for w in words)
        assert cwe.terms == dict(want)
        assert wd.entries == dict(Counter(len(D) - w.count(0) for w in words))
        assert np.array_equal(all_codewords(ctx, a), np.array(words))
        b = ctx.from_index(ctx.q - 2)
        assert list(codeword(ctx, ds, b)) == words[ctx.q - 2]


def test_workers_do_not_change_result():
    ctx = field(3, 6)
    a = ctx.beta
    assert enumerate_code(ctx, a, chunk=50) == enumerate_code(ctx, a, workers=3, chunk=64)


@given(st.sampled_from([(3, 3), (3, 4), (5, 3), (7, 3)]), st.integers(1, 200), st.integers(1, 6))
def test_cwe_invariant_under_scalar_relabeling(pm, k, lam):
    ctx = field(*pm)
    a = elements_outside_prime_field(ctx)[k % (ctx.q - ctx.p)]
    lam = lam % ctx.p or 1
    _, cwe = enumerate_code(ctx, a)
    assert cwe.scaled(lam) == cwe
    assert cwe.total() == ctx.q


@given(st.sampled_from([(3, 3), (3, 4), (3, 5), (5, 3)]), st.integers(0, 100))
def test_first_moment(pm, k):
    """Each coordinate is a nonzero functional, so it is nonzero on (p-1)p^(m-1) of the words."""
    ctx = field(*pm)
    a = elements_outside_prime_field(ctx)[k % (ctx.q - ctx.p)]
    wd, _ = enumerate_code(ctx, a)
    p, m = pm
    assert wd.moment(1) == wd.n * (p - 1) * p ** (m - 1)
    assert wd.moment(0) == p**m


def brute_dual_low(ctx, a):
    """Count vectors of weight 1..3 in the kernel of the generator matrix directly."""
    G = generator_matrix(ctx, a)
    p, n = ctx.p, G.shape[1]
    out = []
    for w in (1, 2, 3):
        total = 0
        coeffs = np.array(list(itertools.product(range(1, p), repeat=w)))
        for supp in itertools.combinations(range(n), w):
            total += int(np.count_nonzero((G[:, supp] @ coeffs.T % p == 0).all(axis=0)))
        out.append(total)
    return tuple(out)


@pytest.mark.parametrize("p,m", [(3, 3), (3, 4), (3, 5), (5, 3), (5, 4)])
def test_dual_low_weights_three_ways(p, m):
    ctx = field(p, m)
    for a in elements_outside_prime_field(ctx, 2) + elements_outside_prime_field(ctx, 1, start=ctx.q // 3):
        col = dual_low_weights_columns(ctx, a).values()
        assert col == brute_dual_low(ctx, a)
        wd, _ = enumerate_code(ctx, a)
        assert dual_low_weights_moments(wd, p).values() == col


def test_moments_of_full_space_have_trivial_dual():
    for p, n in [(3, 5), (5, 4), (7, 3)]:
        assert dual_low_weights_moments(full_space_distribution(n, p), p).values() == (0, 0, 0)


def test_moments_reject_bad_input():
    with pytest.raises(InconsistentMoments):
        dual_low_weights_moments(WeightDistribution({0: 1, 3: 5}, 4, 2), 3)
    with pytest.raises(InconsistentMoments):
        dual_low_weights_moments(WeightDistribution({0: 1, 1: 8}, 4, 2), 3)


def test_rank_matches_sympy():
    rng = np.random.default_rng(1)
    for p in (3, 5, 7):
        for _ in range(20):
            shape = tuple(int(v) for v in rng.integers(1, 6, size=2))
            mat = rng.integers(0, p, size=shape) * (rng.random(shape) < 0.6)
            gf = sympy.polys.matrices.DomainMatrix.from_Matrix(sympy.Matrix(mat.tolist()))
            assert rank_mod_p(mat, p) == gf.convert_to(sympy.GF(p)).rank()


def test_generator_matrix_other_basis():
    ctx = field(3, 4)
    a = ctx.beta
    basis = [ctx.beta**k for k in (0, 1, 2, 3)]
    G = generator_matrix(ctx, a, basis)
    assert rank_mod_p(G, 3) == 4
    with pytest.raises(NotABasis):
        generator_matrix(ctx, a, [ctx.one, ctx.scalar(2), ctx.beta, ctx.beta**2])
    with pytest.raises(NotABasis):
        generator_matrix(ctx, a, basis[:3])


def test_size_guard(monkeypatch):
    ctx = field(3, 5)
    monkeypatch.setenv("TRACECODE_MAX_FIELD", "200")
    with pytest.raises(TooLarge):
        enumerate_code(ctx, ctx.beta)
    enumerate_code(ctx, ctx.beta, bound=243)
    monkeypatch.delenv("TRACECODE_MAX_FIELD")
    assert codes.max_field() == 3**10
    with pytest.raises(TooLarge):
        dual_low_weights_columns(ctx, ctx.beta, bound=10)


def test_dimension_mismatch(monkeypatch):
    ctx = field(3, 4)
    real = codes.generator_matrix

    def degenerate(*args, **kw):
        g = real(*args, **kw)
        g[-1] = g[0]
        return g

    monkeypatch.setattr(codes, "generator_matrix", degenerate)
    with pytest.raises(DimensionMismatch):
        enumerate_code(ctx, ctx.beta)


def test_input_errors():
    with pytest.raises(AInPrimeField):
        defining_set(field(3, 3), field(3, 3).scalar(2))
    with pytest.raises(DegreeTooSmall):
        defining_set(field(3, 2), field(3, 2).beta)
    with pytest.raises(EmptyCode):
        min_distance(WeightDistribution({0: 1}, 3, 0))


def test_small_helpers():
    assert weight([0, 1, 2, 0]) == 2
    wd = full_space_distribution(3, 3)
    assert wd.total() == 27 and min_distance(wd) == 1
    assert dual_min_distance_upto3(codes.DualLowWeights(0, 0, 0, "x")) == ">3"
    assert dual_min_distance_upto3(codes.DualLowWeights(0, 4, 0, "x")) == 2
    cwe = CompleteWeightEnumerator({(3, 0, 0): 1, (1, 1, 1): 2}, 3, 3)
    assert cwe.weight_distribution(1).entries == {0: 1, 2: 2}


def test_dump_format():
    ctx = field(3, 3)
    buf = io.StringIO()
    dump_codewords(ctx, ctx.beta, buf, by_exponent=True)
    lines = buf.getvalue().splitlines()
    assert len(lines) == 27
    assert lines[0] == "0 " + "0" * 3
    words = all_codewords(ctx, ctx.beta)
    label, digits = lines[ctx.beta.index].split()
    assert label == "exp:1"
    assert digits == "".join(str(v) for v in words[ctx.beta.index])
