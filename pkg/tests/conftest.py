import functools

import pytest
from hypothesis import HealthCheck, settings

from tracecode.field import element_from_exponent, make_field

settings.register_profile(
    "repo", deadline=None, max_examples=60, suppress_health_check=[HealthCheck.too_slow]
)
settings.load_profile("repo")

F3_8_MODULUS = (2, 2, 2, 0, 1, 2, 0, 0, 1)
F3_6_MODULUS = (2, 2, 1, 0, 2, 0, 1)


@functools.lru_cache(maxsize=None)
def field(p, m, modulus=None):
    """Fields are immutable, so one instance per (p, m, modulus) is shared across tests."""
    return make_field(p, m, modulus, primitive=modulus is None)


def elements_outside_prime_field(ctx, count=None, start=1):
    """beta^k for k = start, start+1, ... skipping the prime field."""
    step = (ctx.q - 1) // (ctx.p - 1)
    ks = [k for k in range(start, ctx.q - 1) if k % step]
    if count is not None:
        ks = ks[:count]
    return [element_from_exponent(ctx, k) for k in ks]


# acceptance criteria record their outcome here; printed at the end of the run
ACCEPTANCE = {}


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for num in sorted(ACCEPTANCE):
        ok, text = ACCEPTANCE[num]
        terminalreporter.write_line(f"criterion {num:>2}: {'PASS' if ok else 'FAIL'}  {text}")


@pytest.fixture
def record_criterion():
    def record(num, ok, text):
        ACCEPTANCE[num] = (bool(ok), text)
        print(f"criterion {num}: {'PASS' if ok else 'FAIL'}  {text}")
        return ok

    return record



def _cheap_label(ctx, a):
    from tracecode.char_sums import quadratic_character, subfield_witness
    from tracecode.field import in_subfield

    m = ctx.m
    if m % 2:
        return "MDS_m3" if m == 3 else "T1_oddM"
    if in_subfield(ctx, a, 2):
        if m % 4 == 0:
            return "C2_4divM_aInFp2"
        return "C4_etaMinus1" if quadratic_character(ctx, a) == -1 else "T2_evenM_aInFp2"
    return "C3_sDivHalfM" if subfield_witness(ctx, a) is not None else "T3_evenM_aNotInFp2"


def a_by_regime(ctx, per=5):
    """Up to `per` elements (with their classification) for every theorem label the field admits."""
    from tracecode.closed_form import classify_case

    found = {}
    for a in elements_outside_prime_field(ctx):
        bucket = found.setdefault(_cheap_label(ctx, a), [])
        if len(bucket) < per:
            bucket.append(a)
    out = {}
    for label, elems in found.items():
        cases = [(a, classify_case(ctx, a)) for a in elems]
        assert all(c.label == label for _, c in cases)
        out[label] = cases
    return out
