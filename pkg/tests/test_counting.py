import numpy as np
import pytest

from tracecode.char_sums import I1, I2
from tracecode.counting import (
    aux_counts,
    classify_all,
    classify_b,
    count_N_brute,
    count_N_closed,
    count_N_closed_case,
    count_N_table,
    m_set,
    m_set_predicted,
    region_sizes_brute,
    region_sizes_closed,
    remark_identity,
)
from tracecode.errors import AInPrimeField, DegreeTooSmall
from tracecode.field import in_subfield

from conftest import elements_outside_prime_field, field

FIELDS = [(3, 3), (3, 4), (3, 5), (5, 3), (5, 4), (7, 3), (3, 6)]


def sample_a(ctx, count=6):
    """A few generic elements plus every regime that the field offers."""
    picks = elements_outside_prime_field(ctx, count)
    if ctx.m % 2 == 0:
        sub = [x for x in elements_outside_prime_field(ctx) if in_subfield(ctx, x, 2)]
        picks += sub[:2]
    return picks


@pytest.mark.parametrize("p,m", FIELDS)
def test_closed_N_matches_table(p, m):
    ctx = field(p, m)
    for a in sample_a(ctx, 3):
        table = count_N_table(ctx, a)
        cases = classify_all(ctx, a)
        for bi, bc in enumerate(cases, start=1):
            for rho in range(p):
                assert count_N_closed_case(p, m, bc, rho) == table[bi, rho], (a, bi, rho, bc)


def test_table_agrees_with_full_scan():
    ctx = field(3, 4)
    rng = np.random.default_rng(0)
    for a in sample_a(ctx, 2):
        table = count_N_table(ctx, a)
        for bi in rng.integers(1, ctx.q, size=15):
            b = ctx.from_index(int(bi))
            for rho in range(3):
                assert count_N_brute(ctx, a, b, rho) == table[bi, rho]
                assert count_N_closed(ctx, a, b, rho) == table[bi, rho]


def test_printed_sign_in_odd_case3_is_wrong():
    ctx = field(3, 5)
    a = elements_outside_prime_field(ctx, 1)[0]
    table = count_N_table(ctx, a)
    wrong = 0
    for bi, bc in enumerate(classify_all(ctx, a), start=1):
        if bc.case_id != "Case3":
            continue
        for rho in range(1, 3):
            assert count_N_closed_case(3, 5, bc, rho) == table[bi, rho]
            wrong += count_N_closed_case(3, 5, bc, rho, as_printed=True) != table[bi, rho]
    assert wrong > 0


def test_classification_is_consistent():
    ctx = field(5, 3)
    a = ctx.beta
    cases = classify_all(ctx, a)
    for bi in (1, 7, 33, 124):
        assert cases[bi - 1] == classify_b(ctx, a, ctx.from_index(bi))


@pytest.mark.parametrize("p,m", FIELDS)
def test_region_sizes(p, m):
    ctx = field(p, m)
    for a in sample_a(ctx, 4):
        brute = region_sizes_brute(ctx, a)
        closed = region_sizes_closed(ctx, a, I1(ctx, a), I2(ctx, a))
        assert brute == closed, a
        assert brute.total() == ctx.q - 1


@pytest.mark.parametrize("p,m", FIELDS)
def test_aux_counts(p, m):
    ctx = field(p, m)
    triples = list(np.ndindex(p, p, p))
    if p > 3:
        rng = np.random.default_rng(p * m)
        triples = [(0, 0, 0)] + [triples[i] for i in rng.choice(len(triples), 30, replace=False)]
    for a in sample_a(ctx, 2):
        for g in triples:
            res = aux_counts(ctx, a, g, eps=1 if sum(g) % 2 else -1)
            assert res.T_matches(), (a, g)
            assert res.L_matches(), (a, g)


@pytest.mark.parametrize("p,m", [(3, 3), (3, 4), (5, 4), (3, 6)])
def test_m_set(p, m):
    ctx = field(p, m)
    for a in sample_a(ctx, 3):
        got = m_set(ctx, a)
        assert got == m_set_predicted(ctx, a)
        full = p**3 - 1
        assert len(got) == (full - (p - 1) if m % 2 == 0 and in_subfield(ctx, a, 2) else full)


def test_remark_identity_only_for_quadratic_subfield():
    ctx = field(3, 4)
    for a in elements_outside_prime_field(ctx):
        if in_subfield(ctx, a, 2):
            assert remark_identity(ctx, a, I1(ctx, a), I2(ctx, a)) == 0


def test_errors():
    ctx = field(3, 2)
    with pytest.raises(DegreeTooSmall):
        count_N_closed(ctx, ctx.beta, ctx.one, 0)
    big = field(3, 3)
    with pytest.raises(AInPrimeField):
        count_N_table(big, big.one)
