"""Regime classification and the closed-form weight tables and enumerators.

Weight tables and complete weight enumerators are transcribed separately, so
marginalizing a predicted enumerator and reading the matching table are two
independent routes to the same weight distribution.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field
from fractions import Fraction

from .char_sums import I1 as _I1, I2 as _I2, legendre, quadratic_character, subfield_witness
from .codes import CompleteWeightEnumerator, WeightDistribution
from .errors import (
    AInPrimeField,
    DegreeTooSmall,
    NegativeFrequency,
    NonIntegerFrequency,
    OutOfRegime,
)
from .field import FieldCtx, FieldElement, in_subfield

LABELS = (
    "T1_oddM",
    "T2_evenM_aInFp2",
    "T3_evenM_aNotInFp2",
    "C2_4divM_aInFp2",
    "C3_sDivHalfM",
    "C4_etaMinus1",
    "MDS_m3",
)

# the values of (I1, I2, eta) that the specialized theorems presuppose
SPECIAL_VALUES = {
    "C2_4divM_aInFp2": lambda p: (p, p * p - 1, 1),
    "C3_sDivHalfM": lambda p: (p, p * p, 1),
    "C4_etaMinus1": lambda p: (1, 0, -1),
}


@dataclass(frozen=True)
class TheoremCase:
    label: str
    general_label: str
    p: int
    m: int
    s: int | None
    eta_a: int
    I1: int
    I2: int

    def general(self) -> TheoremCase:
        return TheoremCase(self.general_label, self.general_label, self.p, self.m, self.s,
                           self.eta_a, self.I1, self.I2)


@dataclass
class PredictedTables:
    wd: WeightDistribution
    cwe: CompleteWeightEnumerator
    source: str
    vanishing_weights: list[int] = field(default_factory=list)


def classify_case(ctx: FieldCtx, a: FieldElement) -> TheoremCase:
    """Most specific theorem regime for (p, m, a), with the general one as fallback."""
    if a.in_prime_field():
        raise AInPrimeField(f"a = {a} lies in the prime field")
    p, m = ctx.p, ctx.m
    if m < 3:
        raise DegreeTooSmall(f"m = {m} < 3")
    eta = quadratic_character(ctx, a)
    i1, i2 = _I1(ctx, a), _I2(ctx, a)
    s = None
    if m % 2:
        general = "T1_oddM"
        label = "MDS_m3" if m == 3 else general
    elif in_subfield(ctx, a, 2):
        general = "T2_evenM_aInFp2"
        if m % 4 == 0:
            label = "C2_4divM_aInFp2"
        elif eta == -1:
            label = "C4_etaMinus1"
        else:
            label = general
    else:
        general = "T3_evenM_aNotInFp2"
        s = subfield_witness(ctx, a)
        label = "C3_sDivHalfM" if s is not None else general
    return TheoremCase(label, general, p, m, s, eta, i1, i2)


def _pw(p: int, k: int) -> Fraction:
    return Fraction(p) ** k


def _check_freq(value: Fraction, what: str) -> int:
    if value.denominator != 1:
        raise NonIntegerFrequency(f"{what}: frequency {value} is not an integer")
    if value < 0:
        raise NegativeFrequency(f"{what}: frequency {value} is negative")
    return int(value)


class _Terms:
    """Accumulates (coefficient, composition) pairs of an enumerator display."""

    def __init__(self, p: int, n: int):
        self.p, self.n = p, n
        self.terms: Counter = Counter()

    def add(self, coeff, exps, what: str):
        coeff = Fraction(coeff)
        count = _check_freq(coeff, what)
        if count == 0:
            return
        exps = [Fraction(x) for x in exps]
        if any(x.denominator != 1 for x in exps):
            raise NonIntegerFrequency(f"{what}: fractional exponent in {exps}")
        if any(x < 0 for x in exps):
            raise NegativeFrequency(f"{what}: negative exponent with coefficient {count}")
        self.terms[tuple(int(x) for x in exps)] += count

    def add_gamma_sum(self, coeff, at_gamma, other, what: str):
        """coeff * sum over gamma != 0 of w_gamma^at_gamma prod_{rho != gamma} w_rho^other(rho, gamma)."""
        for g in range(1, self.p):
            exps = [at_gamma if r == g else other(r, g) for r in range(self.p)]
            self.add(coeff, exps, what)

    def add_zero_led(self, coeff, t0, rest, what: str):
        """coeff * w_0^t0 prod_{rho != 0} w_rho^rest(rho)."""
        self.add(coeff, [t0] + [rest(r) for r in range(1, self.p)], what)

    def enumerator(self) -> CompleteWeightEnumerator:
        return CompleteWeightEnumerator(dict(self.terms), self.n, self.p)


def _cwe_t1(case: TheoremCase, I2: int) -> CompleteWeightEnumerator:
    p, m = case.p, case.m
    e, h, q5 = _pw(p, m - 3), _pw(p, (m - 3) // 2), _pw(p, (m - 5) // 2) if m >= 5 else Fraction(1, p)
    L = legendre
    T = _Terms(p, p ** (m - 2))
    T.add(1, [p ** (m - 2)] + [0] * (p - 1), "zero word")
    T.add(p ** (m - 1) - p ** (m - 2) + p ** (m - 3) - 1, [e] * p, "flat")
    half = Fraction(1, 2)
    for sgn in (-1, 1):
        T.add_zero_led(half * (p - 1) * p ** (m - 2), e, lambda r: e + sgn * L(p, -r) * h, "w0 lead")
    T.add_gamma_sum(half * (e - I2 * q5), e - (p - 1) * h, lambda r, g: e + h, "gamma low")
    T.add_gamma_sum(half * (e + I2 * q5), e + (p - 1) * h, lambda r, g: e - h, "gamma high")
    for sgn in (1, -1):
        coeff = half * ((p - 1) * p ** (m - 2) + sgn * L(p, -1) * (I2 - p) * q5)
        T.add_gamma_sum(coeff, e, lambda r, g: e + sgn * L(p, r * pow(g, p - 2, p) - 1) * h,
                        "gamma mixed")
    return T.enumerator()


def _cwe_mds(case: TheoremCase) -> CompleteWeightEnumerator:
    p = case.p
    L = legendre
    T = _Terms(p, p)
    half = Fraction(p * (p - 1), 2)
    T.add(1, [p] + [0] * (p - 1), "zero word")
    T.add(p * (p - 1), [1] * p, "flat")
    for sgn in (-1, 1):
        T.add_zero_led(half, 1, lambda r: 1 + sgn * L(p, -r), "w0 lead")
    T.add_gamma_sum(1, p, lambda r, g: 0, "w_gamma^p")
    for sgn in (-1, 1):
        T.add_gamma_sum(half, 1, lambda r, g: 1 + sgn * L(p, r * pow(g, p - 2, p) - 1), "mixed")
    return T.enumerator()


def _even_common(T: _Terms, p: int, m: int, c_gamma_hi, c_gamma_lo, c_zero_hi, c_zero_lo):
    """The four even-m families with exponents e +- (p-1)g and e -+ g."""
    e, g = _pw(p, m - 3), _pw(p, (m - 4) // 2)
    T.add_gamma_sum(c_gamma_hi, e + (p - 1) * g, lambda r, _: e - g, "gamma high")
    T.add_gamma_sum(c_gamma_lo, e - (p - 1) * g, lambda r, _: e + g, "gamma low")
    T.add_zero_led(c_zero_hi, e + (p - 1) * g, lambda r: e - g, "w0 high")
    T.add_zero_led(c_zero_lo, e - (p - 1) * g, lambda r: e + g, "w0 low")


def _cwe_t2(p: int, m: int, I1: int, I2: int, eta: int) -> CompleteWeightEnumerator:
    e, g = _pw(p, m - 3), _pw(p, (m - 4) // 2)
    Y, Z = (p - 1) - eta * I1, p * p - I2
    half = Fraction(1, 2)
    T = _Terms(p, p ** (m - 2))
    T.add(1, [p ** (m - 2)] + [0] * (p - 1), "zero word")
    T.add(p ** (m - 2) - 1, [e] * p, "flat")
    _even_common(
        T, p, m,
        half * (p ** (m - 1) + g * Z), half * (p ** (m - 1) - g * Z),
        half * (p - 1) * (p ** (m - 2) + g * Y), half * (p - 1) * (p ** (m - 2) - g * Y),
    )
    return T.enumerator()


def _cwe_t3(p: int, m: int, I1: int, I2: int, eta: int) -> CompleteWeightEnumerator:
    e, g, k, f = _pw(p, m - 3), _pw(p, (m - 4) // 2), _pw(p, (m - 2) // 2), _pw(p, (m - 6) // 2)
    X = (p - 1) * (1 + eta * I1) - I2
    Y, Z = (p - 1) - eta * I1, p * p - I2
    half = Fraction(1, 2)
    L = legendre
    T = _Terms(p, p ** (m - 2))
    T.add(1, [p ** (m - 2)] + [0] * (p - 1), "zero word")
    T.add(p ** (m - 1) - p ** (m - 2) + p ** (m - 3) - 1, [e] * p, "flat")
    for sgn in (-1, 1):
        T.add_gamma_sum(half * (e + sgn * f * X), e,
                        lambda r, gm: e + sgn * L(p, 1 - r * pow(gm, p - 2, p)) * k, "trace mixed")
    _even_common(
        T, p, m,
        half * ((p - 1) * p ** (m - 2) + g * Z), half * ((p - 1) * p ** (m - 2) - g * Z),
        half * (p - 1) * (p ** (m - 2) + g * Y), half * (p - 1) * (p ** (m - 2) - g * Y),
    )
    return T.enumerator()


def _cwe_c2(p: int, m: int) -> CompleteWeightEnumerator:
    g = _pw(p, (m - 4) // 2)
    e = _pw(p, m - 3)
    half = Fraction(1, 2)
    T = _Terms(p, p ** (m - 2))
    T.add(1, [p ** (m - 2)] + [0] * (p - 1), "zero word")
    T.add(p ** (m - 2) - 1, [e] * p, "flat")
    _even_common(
        T, p, m,
        half * (p ** (m - 1) + g), half * (p ** (m - 1) - g),
        half * (p - 1) * (p ** (m - 2) - g), half * (p - 1) * (p ** (m - 2) + g),
    )
    return T.enumerator()


def _cwe_c3(p: int, m: int) -> CompleteWeightEnumerator:
    e, g, k, f = _pw(p, m - 3), _pw(p, (m - 4) // 2), _pw(p, (m - 2) // 2), _pw(p, (m - 6) // 2)
    half = Fraction(1, 2)
    L = legendre
    T = _Terms(p, p ** (m - 2))
    T.add(1, [p ** (m - 2)] + [0] * (p - 1), "zero word")
    T.add(p ** (m - 1) - p ** (m - 2) + p ** (m - 3) - 1, [e] * p, "flat")
    for sgn, c in ((-1, e + f), (1, e - f)):
        T.add_gamma_sum(half * c, e,
                        lambda r, gm: e + sgn * L(p, 1 - r * pow(gm, p - 2, p)) * k, "trace mixed")
    body = half * (p - 1) * p ** (m - 2)
    _even_common(
        T, p, m, body, body,
        half * (p - 1) * (p ** (m - 2) - g), half * (p - 1) * (p ** (m - 2) + g),
    )
    return T.enumerator()


def _cwe_c4(p: int, m: int) -> CompleteWeightEnumerator:
    e = _pw(p, m - 3)
    half = Fraction(1, 2)
    T = _Terms(p, p ** (m - 2))
    T.add(1, [p ** (m - 2)] + [0] * (p - 1), "zero word")
    T.add(p ** (m - 2) - 1, [e] * p, "flat")
    _even_common(
        T, p, m,
        half * (p ** (m - 1) + p ** (m // 2)), half * (p ** (m - 1) - p ** (m // 2)),
        half * (p - 1) * (p ** (m - 2) + p ** ((m - 2) // 2)),
        half * (p - 1) * (p ** (m - 2) - p ** ((m - 2) // 2)),
    )
    return T.enumerator()


def predict_cwe(case: TheoremCase) -> CompleteWeightEnumerator:
    """Expand the theorem's enumerator display into explicit compositions."""
    p, m = case.p, case.m
    lab = case.label
    if lab == "MDS_m3":
        return _cwe_mds(case)
    if lab == "T1_oddM":
        return _cwe_t1(case, case.I2)
    if lab == "T2_evenM_aInFp2":
        return _cwe_t2(p, m, case.I1, case.I2, case.eta_a)
    if lab == "T3_evenM_aNotInFp2":
        return _cwe_t3(p, m, case.I1, case.I2, case.eta_a)
    if lab == "C2_4divM_aInFp2":
        return _cwe_c2(p, m)
    if lab == "C3_sDivHalfM":
        return _cwe_c3(p, m)
    if lab == "C4_etaMinus1":
        return _cwe_c4(p, m)
    raise OutOfRegime(f"unknown label {lab}")


def _table(p: int, m: int, rows: list[tuple], source: str) -> tuple[WeightDistribution, list[int]]:
    acc: Counter = Counter({0: 1})
    vanishing = []
    for w, freq in rows:
        w = Fraction(w)
        if w.denominator != 1 or w < 0:
            raise NonIntegerFrequency(f"{source}: weight {w} is not a nonnegative integer")
        c = _check_freq(Fraction(freq), f"{source} weight {w}")
        if c == 0:
            vanishing.append(int(w))
        acc[int(w)] += c
    return WeightDistribution(dict(acc), p ** (m - 2), m), vanishing


def _wd_rows(case: TheoremCase) -> list[tuple]:
    p, m = case.p, case.m
    base = p ** (m - 2) - p ** (m - 3)
    half = Fraction(1, 2)
    lab = case.label
    if lab == "MDS_m3":
        # [p, 3, p-2]: weights p-2, p-1, p
        return [
            (p - 2, half * (p - 1) * ((p - 1) * p + 1 - 1)),
            (p - 1, 2 * (p - 1) * p + 1 - 1),
            (p, half * (p - 1) * ((p - 1) * p + 1 + 1)),
        ]
    if lab == "T1_oddM":
        h = _pw(p, (m - 3) // 2)
        return [
            (base - h, half * (p - 1) * ((p - 1) * p ** (m - 2) + p ** (m - 3) - h)),
            (base, 2 * (p - 1) * p ** (m - 2) + p ** (m - 3) - 1),
            (base + h, half * (p - 1) * ((p - 1) * p ** (m - 2) + p ** (m - 3) + h)),
        ]
    g = _pw(p, (m - 4) // 2)
    Y = (p - 1) - case.eta_a * case.I1
    Z = p * p - case.I2
    if lab == "T2_evenM_aInFp2":
        return [
            (base - (p - 1) * g, half * (p - 1) * (p ** (m - 2) + g * Y)),
            (base - g, half * (p - 1) * (p ** (m - 1) - g * Z)),
            (base, p ** (m - 2) - 1),
            (base + g, half * (p - 1) * (p ** (m - 1) + g * Z)),
            (base + (p - 1) * g, half * (p - 1) * (p ** (m - 2) - g * Y)),
        ]
    if lab == "T3_evenM_aNotInFp2":
        k, f = _pw(p, (m - 2) // 2), _pw(p, (m - 6) // 2)
        X = (p - 1) * (1 + case.eta_a * case.I1) - case.I2
        return [
            (base - k, half * (p - 1) * (p ** (m - 3) + f * X)),
            (base - (p - 1) * g, half * (p - 1) * (p ** (m - 2) + g * Y)),
            (base - g, half * (p - 1) * ((p - 1) * p ** (m - 2) - g * Z)),
            (base, p ** (m - 1) - p ** (m - 2) + p ** (m - 3) - 1),
            (base + g, half * (p - 1) * ((p - 1) * p ** (m - 2) + g * Z)),
            (base + (p - 1) * g, half * (p - 1) * (p ** (m - 2) - g * Y)),
            (base + k, half * (p - 1) * (p ** (m - 3) - f * X)),
        ]
    if lab == "C2_4divM_aInFp2":
        return [
            (base - (p - 1) * g, half * (p - 1) * (p ** (m - 2) - g)),
            (base - g, half * (p - 1) * (p ** (m - 1) - g)),
            (base, p ** (m - 2) - 1),
            (base + g, half * (p - 1) * (p ** (m - 1) + g)),
            (base + (p - 1) * g, half * (p - 1) * (p ** (m - 2) + g)),
        ]
    if lab == "C3_sDivHalfM":
        k, f = _pw(p, (m - 2) // 2), _pw(p, (m - 6) // 2)
        return [
            (base - k, half * (p - 1) * (p ** (m - 3) - f)),
            (base - (p - 1) * g, half * (p - 1) * (p ** (m - 2) - g)),
            (base - g, half * (p - 1) ** 2 * p ** (m - 2)),
            (base, p ** (m - 1) - p ** (m - 2) + p ** (m - 3) - 1),
            (base + g, half * (p - 1) ** 2 * p ** (m - 2)),
            (base + (p - 1) * g, half * (p - 1) * (p ** (m - 2) + g)),
            (base + k, half * (p - 1) * (p ** (m - 3) + f)),
        ]
    if lab == "C4_etaMinus1":
        return [
            (base - (p - 1) * g, half * (p - 1) * (p ** (m - 2) + p ** ((m - 2) // 2))),
            (base - g, half * (p - 1) * (p ** (m - 1) - p ** (m // 2))),
            (base, p ** (m - 2) - 1),
            (base + g, half * (p - 1) * (p ** (m - 1) + p ** (m // 2))),
            (base + (p - 1) * g, half * (p - 1) * (p ** (m - 2) - p ** ((m - 2) // 2))),
        ]
    raise OutOfRegime(f"unknown label {lab}")


def predict_wd(case: TheoremCase) -> WeightDistribution:
    """Evaluate the weight table of the case exactly; rows that vanish are dropped."""
    return _table(case.p, case.m, _wd_rows(case), case.label)[0]


def predict(case: TheoremCase) -> PredictedTables:
    wd, vanishing = _table(case.p, case.m, _wd_rows(case), case.label)
    return PredictedTables(wd, predict_cwe(case), case.label, vanishing)


def specialize(case: TheoremCase) -> TheoremCase:
    """The general-theorem case with I1, I2, eta replaced by the values the special theorem assumes."""
    if case.label in SPECIAL_VALUES:
        i1, i2, eta = SPECIAL_VALUES[case.label](case.p)
        return TheoremCase(case.general_label, case.general_label, case.p, case.m, case.s,
                           eta, i1, i2)
    if case.label == "MDS_m3":
        return TheoremCase("T1_oddM", "T1_oddM", case.p, case.m, None, case.eta_a, case.I1, case.p)
    return case


@dataclass(frozen=True)
class DualPrediction:
    distance: int
    a1: int
    a2: int
    a3: int | None
    printed_a3: int | None = None
    source: str = ""


def odd_m_a3(p: int, m: int) -> int:
    """A3 of the dual for odd m, solved from the odd-m weight table via the power moments."""
    e = p ** (m - 3)
    return (p - 1) ** 3 * e * (e - 1) // 6


def odd_m_a3_printed(p: int, m: int) -> Fraction:
    """The published odd-m expression, kept for comparison; it disagrees with enumeration."""
    return Fraction((p - 1) * p ** (2 * m - 6)
                    * ((p - 2) * p ** (2 * m - 6) + (p - 1) ** 2 * p ** (m - 3) - p * p + p + 1), 6)


def predict_dual(case: TheoremCase) -> DualPrediction:
    """Dual distance together with the first nonzero low-weight count."""
    p, m = case.p, case.m
    if m < 4:
        raise OutOfRegime("the dual-parameter theorem needs m >= 4")
    lab = case.label
    if lab == "T1_oddM":
        printed = odd_m_a3_printed(p, m)
        return DualPrediction(3, 0, 0, odd_m_a3(p, m),
                              int(printed) if printed.denominator == 1 else None, "odd m")
    if lab == "C2_4divM_aInFp2":
        v = Fraction(p ** (m - 4) * (p - 1) ** 2 * (p ** (m - 1) - p ** (m - 2) - p * p + 3), 6)
        return DualPrediction(3, 0, 0, _check_freq(v, "A3"), _check_freq(v, "A3"), "4 | m")
    if lab == "C4_etaMinus1":
        v = Fraction(p ** (m - 4) * (p - 1) ** 2 * (p ** (m - 1) - p ** (m - 2) - p + 1), 6)
        return DualPrediction(3, 0, 0, _check_freq(v, "A3"), _check_freq(v, "A3"), "eta(a) = -1")
    if lab == "C3_sDivHalfM":
        v = Fraction(p ** (m - 4) * (p - 1) ** 2, 2)
        return DualPrediction(2, 0, _check_freq(v, "A2"), None, None, "s | m/2")
    raise OutOfRegime(f"no dual prediction for {lab}")


def mds_check(n: int, k: int, d: int) -> bool:
    return d == n - k + 1
