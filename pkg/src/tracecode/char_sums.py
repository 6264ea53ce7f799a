"""Quadratic characters, Gauss sums and the sums I1(a), I2(a).

Symbolic Gauss sums are carried as :class:`GaussValue` (a fourth root of unity
times a half-integer power of p) so that table formulas reduce to exact
integers; complex floating point is only used to cross-check identities.
"""

from __future__ import annotations

import cmath
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .errors import AInPrimeField, InternalError, NoQuadraticRelation, NonIntegerFormula, TooLarge
from .field import FieldCtx, FieldElement, divisors, in_subfield, trace

NUMERIC_LIMIT = 3**10
TOLERANCE = 1e-6


def legendre(p: int, v: int) -> int:
    """eta_1: the quadratic character of F_p, with eta_1(0) = 0."""
    v %= p
    if v == 0:
        return 0
    return 1 if pow(v, (p - 1) // 2, p) == 1 else -1


def quadratic_character(ctx: FieldCtx, x: FieldElement) -> int:
    if x.is_zero():
        return 0
    r = x ** ((ctx.q - 1) // 2)
    if r == ctx.one:
        return 1
    if r == -ctx.one:
        return -1
    raise InternalError(f"x^((q-1)/2) = {r} is not +-1")


@dataclass(frozen=True)
class GaussValue:
    """The exact complex number ``i**quarter * p**(half_exp/2)``."""

    p: int
    quarter: int
    half_exp: int

    def __post_init__(self):
        object.__setattr__(self, "quarter", self.quarter % 4)

    @property
    def unit(self) -> complex:
        return (1, 1j, -1, -1j)[self.quarter]

    def __mul__(self, other: GaussValue) -> GaussValue:
        if other.p != self.p:
            raise ValueError("Gauss values over different primes")
        return GaussValue(self.p, self.quarter + other.quarter, self.half_exp + other.half_exp)

    def __neg__(self) -> GaussValue:
        return GaussValue(self.p, self.quarter + 2, self.half_exp)

    def signed(self, sign: int) -> GaussValue:
        return self if sign > 0 else -self

    def over_p(self, k: int) -> GaussValue:
        """Divide by p**k."""
        return GaussValue(self.p, self.quarter, self.half_exp - 2 * k)

    def is_rational(self) -> bool:
        return self.quarter in (0, 2) and self.half_exp % 2 == 0

    def to_fraction(self) -> Fraction:
        if not self.is_rational():
            raise NonIntegerFormula(f"{self} is not a rational number")
        sign = 1 if self.quarter == 0 else -1
        return sign * Fraction(self.p) ** (self.half_exp // 2)

    def __complex__(self) -> complex:
        return complex(self.unit * self.p ** (self.half_exp / 2))

    def sign(self) -> int:
        """Sign of a real value."""
        if self.quarter not in (0, 2):
            raise NonIntegerFormula(f"{self} is not real")
        return 1 if self.quarter == 0 else -1


def gauss_sum_closed(p: int, m: int) -> GaussValue:
    """G_m = (-1)^(m-1) * i^((p-1)^2 m / 4) * p^(m/2)."""
    quarter = ((p - 1) ** 2 * m // 4) % 4
    if (m - 1) % 2:
        quarter += 2
    return GaussValue(p, quarter, m)


def _zeta_powers(p: int) -> np.ndarray:
    return np.exp(2j * np.pi * np.arange(p) / p)


def gauss_sum_numeric(ctx: FieldCtx) -> complex:
    if ctx.q > NUMERIC_LIMIT:
        raise TooLarge(f"p^m = {ctx.q} exceeds {NUMERIC_LIMIT}")
    t = ctx.tables
    return complex(np.sum(t.eta * _zeta_powers(ctx.p)[t.trace]))


def weil_quadratic_sum(
    ctx: FieldCtx, a2: FieldElement, a1: FieldElement, a0: FieldElement
) -> tuple[complex, complex]:
    """Sum of chi(a2 x^2 + a1 x + a0) over the field, directly and in closed form."""
    if a2.is_zero():
        raise ValueError("a2 must be nonzero")
    if ctx.q > NUMERIC_LIMIT:
        raise TooLarge(f"p^m = {ctx.q} exceeds {NUMERIC_LIMIT}")
    t = ctx.tables
    x = np.arange(ctx.q)
    fx = t.add(t.add(t.mul(a2.index, t.square(x)), t.mul(a1.index, x)), a0.index)
    zeta = _zeta_powers(ctx.p)
    numeric = complex(np.sum(zeta[t.trace[fx]]))
    shift = a0 - a1 * a1 / (4 * a2)
    closed = complex(gauss_sum_closed(ctx.p, ctx.m)) * quadratic_character(ctx, a2) * zeta[trace(ctx, shift)]
    return numeric, closed


def _require_outside_prime_field(a: FieldElement):
    if a.in_prime_field():
        raise AInPrimeField(f"a = {a} lies in the prime field")


def I1(ctx: FieldCtx, a: FieldElement) -> int:
    """sum over z1 in F_p of eta_m(z1 a + 1)."""
    _require_outside_prime_field(a)
    return sum(quadratic_character(ctx, z1 * a + 1) for z1 in range(ctx.p))


def I2(ctx: FieldCtx, a: FieldElement) -> int:
    """sum over z1, z2 in F_p of eta_m(z2 a^2 + z1 a + 1)."""
    _require_outside_prime_field(a)
    a2 = a * a
    return sum(
        quadratic_character(ctx, z2 * a2 + z1 * a + 1)
        for z2 in range(ctx.p)
        for z1 in range(ctx.p)
    )


@dataclass
class CharSumReport:
    I1: int
    I2: int
    eta_a: int
    predicted_I1: int | None = None
    predicted_I2: int | None = None
    lemma: str | None = None

    def matches(self) -> bool:
        ok = self.predicted_I2 is None or self.predicted_I2 == self.I2
        return ok and (self.predicted_I1 is None or self.predicted_I1 == self.I1)


def char_sum_report(ctx: FieldCtx, a: FieldElement) -> CharSumReport:
    report = CharSumReport(I1(ctx, a), I2(ctx, a), quadratic_character(ctx, a))
    pred = predict_I(ctx, a)
    if pred is not None:
        report.predicted_I1, report.predicted_I2, report.lemma = pred
    return report


def subfield_witness(ctx: FieldCtx, a: FieldElement) -> int | None:
    """Some s > 2 with s | m/2 and a in GF(p^s) but not in GF(p^2), if any."""
    m = ctx.m
    if m % 2 or in_subfield(ctx, a, 2):
        return None
    for s in divisors(m // 2):
        if s > 2 and in_subfield(ctx, a, s):
            return s
    return None


def predict_I(ctx: FieldCtx, a: FieldElement) -> tuple[int | None, int, str] | None:
    """Closed-form (I1, I2) when a matches one of the known hypotheses.

    Returns ``(I1, I2, label)``; I1 is None when only I2 is known (m = 3).
    """
    _require_outside_prime_field(a)
    p, m = ctx.p, ctx.m
    if m == 3:
        return None, p, "m3"
    if m % 2:
        return None
    if in_subfield(ctx, a, 2):
        if m % 4 == 0:
            return p, p * p - 1, "4|m"
        if quadratic_character(ctx, a) == -1:
            return 1, 0, "eta=-1"
        return None
    if subfield_witness(ctx, a) is not None:
        return p, p * p, "s|m/2"
    return None


def quadratic_relation(ctx: FieldCtx, a: FieldElement) -> tuple[int, int]:
    """(b1, b0) in F_p x F_p* with a^2 + b1 a + b0 = 0, by exhaustive search."""
    a2 = a * a
    for b1 in range(ctx.p):
        for b0 in range(1, ctx.p):
            if (a2 + b1 * a + b0).is_zero():
                return b1, b0
    raise NoQuadraticRelation(f"{a} satisfies no quadratic over F_p")


@dataclass
class ESums:
    e1: complex
    e2: complex | None
    e1_closed: complex
    e2_closed: complex | None


def _eta_grid(ctx: FieldCtx, a: FieldElement) -> np.ndarray:
    """eta_m(z2 a^2 + z1 a + z0) indexed [z0, z1, z2]."""
    p = ctx.p
    a2 = a * a
    grid = np.zeros((p, p, p), dtype=np.int64)
    for z0 in range(p):
        for z1 in range(p):
            for z2 in range(p):
                grid[z0, z1, z2] = quadratic_character(ctx, z2 * a2 + z1 * a + z0)
    return grid


def E_sums(ctx: FieldCtx, a: FieldElement, gamma: int, with_e2: bool | None = None) -> ESums:
    """Evaluate E_{1,a}(gamma) (and E_{2,a}(gamma)) numerically beside their closed forms."""
    _require_outside_prime_field(a)
    p, m = ctx.p, ctx.m
    gamma %= p
    if gamma == 0:
        raise ValueError("gamma must be nonzero")
    zeta = _zeta_powers(p)
    eta = _eta_grid(ctx, a)
    z0, z1, z2 = np.meshgrid(np.arange(p), np.arange(p), np.arange(p), indexing="ij")

    e1 = 0j
    for g1 in range(p):
        for g2 in range(1, p):
            g2inv = pow(g2, p - 2, p)
            expo = (-g2 * z2 - g1 * z1 - (g1 * g1 * g2inv + gamma) * z0) % p
            e1 += legendre(p, g2) * np.sum(zeta[expo] * eta)  # eta[0,0,0] = 0
    i2 = I2(ctx, a)
    if m % 2 == 0:
        e1_closed = complex(legendre(p, -gamma) * (p * p - i2) * p)
    else:
        e1_closed = legendre(p, -1) * (i2 - p) * complex(gauss_sum_closed(p, 1))

    if with_e2 is None:
        with_e2 = m % 2 == 0 and in_subfield(ctx, a, 2)
    e2 = e2_closed = None
    if with_e2:
        if m % 2 or not in_subfield(ctx, a, 2):
            raise NoQuadraticRelation("E2 needs even m and a in GF(p^2)")
        b1, b0 = quadratic_relation(ctx, a)
        e2 = 0j
        for g1 in range(p):
            for g2 in range(1, p):
                g2inv = pow(g2, p - 2, p)
                for s in range(p):
                    w0, w1 = s * b0 % p, s * b1 % p
                    expo = (-g2 * s - g1 * w1 - (g1 * g1 * g2inv + gamma) * w0) % p
                    e2 += legendre(p, g2) * zeta[expo] * eta[w0, w1, s]
        e2_closed = 0j
    return ESums(complex(e1), e2, e1_closed, e2_closed)


def close(x: complex, y: complex, scale: float = 1.0) -> bool:
    return abs(complex(x) - complex(y)) <= TOLERANCE * max(scale, 1.0)


def zeta(p: int, k: int) -> complex:
    return cmath.exp(2j * cmath.pi * (k % p) / p)
