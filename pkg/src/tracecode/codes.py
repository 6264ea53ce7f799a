"""The trace code C_{D_a}: construction, brute-force enumeration, dual low weights."""

from __future__ import annotations

import os
from collections import Counter
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from math import comb
from typing import Iterable, Sequence, TextIO

import numpy as np

from .errors import (
    AInPrimeField,
    DegreeTooSmall,
    DimensionMismatch,
    EmptyCode,
    InconsistentMoments,
    NotABasis,
    TooLarge,
)
from .field import FieldCtx, FieldElement

DEFAULT_MAX_FIELD = 3**10
DEFAULT_MAX_DUAL_LENGTH = 1000


def max_field(default: int = DEFAULT_MAX_FIELD) -> int:
    """Size guard on p^m; the TRACECODE_MAX_FIELD environment variable overrides it."""
    env = os.environ.get("TRACECODE_MAX_FIELD")
    return int(env) if env else default


def _guard(ctx: FieldCtx, bound: int | None):
    limit = max_field() if bound is None else bound
    if ctx.q > limit:
        raise TooLarge(f"p^m = {ctx.q} exceeds the bound {limit}")


@dataclass
class WeightDistribution:
    entries: dict[int, int]
    n: int
    k: int

    def __post_init__(self):
        self.entries = {int(w): int(c) for w, c in sorted(self.entries.items()) if c}

    def total(self) -> int:
        return sum(self.entries.values())

    def nonzero_weights(self) -> list[int]:
        return [w for w in self.entries if w]

    def moment(self, r: int) -> int:
        return sum(w**r * c for w, c in self.entries.items())

    def __eq__(self, other):
        if not isinstance(other, WeightDistribution):
            return NotImplemented
        return (self.entries, self.n, self.k) == (other.entries, other.n, other.k)


@dataclass
class CompleteWeightEnumerator:
    terms: dict[tuple[int, ...], int]
    n: int
    p: int

    def __post_init__(self):
        self.terms = {tuple(int(t) for t in c): int(v) for c, v in sorted(self.terms.items()) if v}

    def total(self) -> int:
        return sum(self.terms.values())

    def weight_distribution(self, k: int) -> WeightDistribution:
        wd = Counter()
        for comp, count in self.terms.items():
            wd[self.n - comp[0]] += count
        return WeightDistribution(dict(wd), self.n, k)

    def scaled(self, lam: int) -> CompleteWeightEnumerator:
        """Relabel symbols rho -> lam * rho; the code's CWE is invariant under this."""
        p = self.p
        out = {}
        for comp, count in self.terms.items():
            new = [0] * p
            for rho, t in enumerate(comp):
                new[lam * rho % p] = t
            out[tuple(new)] = count
        return CompleteWeightEnumerator(out, self.n, p)

    def __eq__(self, other):
        if not isinstance(other, CompleteWeightEnumerator):
            return NotImplemented
        return (self.terms, self.n, self.p) == (other.terms, other.n, other.p)


@dataclass
class DefiningSet:
    """D_a in canonical field-enumeration (ascending index) order."""

    ctx: FieldCtx
    a: FieldElement
    indices: np.ndarray = field(repr=False)

    @property
    def n(self) -> int:
        return len(self.indices)

    @property
    def elements(self) -> list[FieldElement]:
        return [self.ctx.from_index(i) for i in self.indices]


def _check_a(ctx: FieldCtx, a: FieldElement):
    if a.in_prime_field():
        raise AInPrimeField(f"a = {a} lies in the prime field")


def defining_set(ctx: FieldCtx, a: FieldElement) -> DefiningSet:
    """{x : Tr(x) = 1, Tr(a x) = 0}."""
    _check_a(ctx, a)
    if ctx.m < 3:
        raise DegreeTooSmall(f"m = {ctx.m} < 3")
    t = ctx.tables
    x = np.arange(ctx.q)
    mask = (t.trace == 1) & (t.trace[t.mul(a.index, x)] == 0)
    return DefiningSet(ctx, a, np.nonzero(mask)[0])


def codeword(ctx: FieldCtx, D: DefiningSet, b: FieldElement) -> np.ndarray:
    """(Tr(b d^2))_{d in D}."""
    if b.ctx != ctx or D.ctx != ctx:
        from .errors import CtxMismatch

        raise CtxMismatch("codeword arguments come from different fields")
    t = ctx.tables
    return t.trace[t.mul(b.index, t.square(D.indices))]


def rank_mod_p(mat: np.ndarray, p: int) -> int:
    a = np.array(mat, dtype=np.int64) % p
    rows, cols = a.shape
    r = 0
    for c in range(cols):
        piv = next((i for i in range(r, rows) if a[i, c]), None)
        if piv is None:
            continue
        a[[r, piv]] = a[[piv, r]]
        a[r] = a[r] * pow(int(a[r, c]), p - 2, p) % p
        for i in range(rows):
            if i != r and a[i, c]:
                a[i] = (a[i] - a[i, c] * a[r]) % p
        r += 1
        if r == rows:
            break
    return r


def polynomial_basis(ctx: FieldCtx) -> list[FieldElement]:
    return [ctx.elem([0] * i + [1]) for i in range(ctx.m)]


def generator_matrix(
    ctx: FieldCtx, a: FieldElement, basis: Sequence[FieldElement] | None = None,
    D: DefiningSet | None = None,
) -> np.ndarray:
    """m x n matrix whose column i is (Tr(v_j d_i^2))_j."""
    basis = polynomial_basis(ctx) if basis is None else list(basis)
    if len(basis) != ctx.m or rank_mod_p(np.array([v.coeffs for v in basis]), ctx.p) != ctx.m:
        raise NotABasis("basis vectors are not F_p-linearly independent")
    D = defining_set(ctx, a) if D is None else D
    t = ctx.tables
    sq = t.square(D.indices)
    return np.stack([t.trace[t.mul(v.index, sq)] for v in basis])


def _compositions(words: np.ndarray, p: int) -> np.ndarray:
    return np.stack([(words == v).sum(axis=1) for v in range(p)], axis=1)


def _tally(args):
    digits, gen, p = args
    words = digits @ gen % p
    comps = _compositions(words, p)
    uniq, counts = np.unique(comps, axis=0, return_counts=True)
    distinct = {row.tobytes() for row in words.astype(np.uint8)}
    return Counter({tuple(int(v) for v in u): int(c) for u, c in zip(uniq, counts)}), distinct


def enumerate_code(
    ctx: FieldCtx, a: FieldElement, bound: int | None = None, workers: int = 1,
    chunk: int = 4096,
) -> tuple[WeightDistribution, CompleteWeightEnumerator]:
    """Tally the composition of every codeword c(b), b over the whole field."""
    _guard(ctx, bound)
    p, m = ctx.p, ctx.m
    D = defining_set(ctx, a)
    gen = generator_matrix(ctx, a, D=D)
    digits = ctx.tables.digits
    jobs = [(digits[i:i + chunk], gen, p) for i in range(0, ctx.q, chunk)]
    if workers > 1:
        with ThreadPoolExecutor(workers) as pool:
            parts = list(pool.map(_tally, jobs))
    else:
        parts = [_tally(job) for job in jobs]

    terms: Counter = Counter()
    distinct: set = set()
    for c, d in parts:
        terms.update(c)
        distinct |= d
    if len(distinct) != ctx.q:
        raise DimensionMismatch(
            f"{ctx.q} values of b gave only {len(distinct)} distinct codewords"
        )
    cwe = CompleteWeightEnumerator(dict(terms), D.n, p)
    return cwe.weight_distribution(m), cwe


def all_codewords(ctx: FieldCtx, a: FieldElement, bound: int | None = None) -> np.ndarray:
    """Row b.index is c(b)."""
    _guard(ctx, bound)
    return ctx.tables.digits @ generator_matrix(ctx, a) % ctx.p


def dump_codewords(ctx: FieldCtx, a: FieldElement, out: TextIO, by_exponent: bool = False):
    """One line per b: the exponent (or coefficients) of b, then the coordinates as digits."""
    words = all_codewords(ctx, a)
    t = ctx.tables
    for idx in range(ctx.q):
        if by_exponent:
            label = "0" if idx == 0 else f"exp:{int(t.log[idx])}"
        else:
            label = ",".join(str(c) for c in ctx.from_index(idx).coeffs)
        out.write(f"{label} {''.join(str(int(v)) for v in words[idx])}\n")


@dataclass
class DualLowWeights:
    a1: int
    a2: int
    a3: int
    method: str

    def values(self) -> tuple[int, int, int]:
        return self.a1, self.a2, self.a3


def projective_classes(ctx: FieldCtx) -> np.ndarray:
    """Canonical representative (smallest index among the F_p* multiples) per element."""
    t = ctx.tables
    x = np.arange(ctx.q)
    return np.min(np.stack([t.scale(lam, x) for lam in range(1, ctx.p)]), axis=0)


def dual_low_weights_columns(
    ctx: FieldCtx, a: FieldElement, bound: int = DEFAULT_MAX_DUAL_LENGTH
) -> DualLowWeights:
    """Count weight-1/2/3 dual words from dependencies among the columns.

    Column i is the image of d_i^2 under an invertible F_p-linear map, so
    dependencies among columns are dependencies among the squares d_i^2.
    """
    D = defining_set(ctx, a)
    if D.n > bound:
        raise TooLarge(f"length {D.n} exceeds the column-count bound {bound}")
    p = ctx.p
    t = ctx.tables
    y = t.square(D.indices)
    canon = projective_classes(ctx)
    cls = canon[y]
    per_class = np.bincount(cls, minlength=ctx.q)

    a1 = (p - 1) * int(np.count_nonzero(y == 0))
    a2 = (p - 1) * sum(comb(int(c), 2) for c in per_class if c > 1)

    # three mutually proportional columns: (p-1)(p-2) all-nonzero dependencies
    collinear = sum(comb(int(c), 3) for c in per_class if c > 2)
    found = 0
    for i in range(D.n - 1):
        rest = y[i + 1:]
        keep = cls[i + 1:] != cls[i]
        for c in range(1, p):
            third = canon[t.add(y[i], t.scale(c, rest))]
            found += int(per_class[third][keep].sum())
    if found % 3:
        raise InconsistentMoments(f"triple discoveries {found} not divisible by 3")
    a3 = (p - 1) * (found // 3) + (p - 1) * (p - 2) * collinear
    return DualLowWeights(a1, a2, a3, "columns")


def dual_low_weights_moments(wd: WeightDistribution, p: int) -> DualLowWeights:
    """Solve the first four Pless power moments for A1, A2, A3 of the dual."""
    n, k = wd.n, wd.k
    if wd.total() != p**k:
        raise InconsistentMoments(f"sum of A_j is {wd.total()}, expected {p**k}")
    pk = Fraction(p) ** k
    s1 = Fraction(wd.moment(1)) / (pk / p)
    s2 = Fraction(wd.moment(2)) / (pk / p**2)
    s3 = Fraction(wd.moment(3)) / (pk / p**3)

    a1 = (p - 1) * n - s1
    a2 = (s2 - (p - 1) * n * (p * n - n + 1) + (2 * p * n - p - 2 * n + 2) * a1) / 2
    a3 = (
        (p - 1) * n * (p * p * n * n - 2 * p * n * n + 3 * p * n - p + n * n - 3 * n + 2)
        - (3 * p * p * n * n - 3 * p * p * n - 6 * p * n * n + 12 * p * n + p * p - 6 * p
           + 3 * n * n - 9 * n + 6) * a1
        + 6 * (p * n - p - n + 2) * a2
        - s3
    ) / 6
    out = []
    for v in (a1, a2, a3):
        if v.denominator != 1 or v < 0:
            raise InconsistentMoments(f"moment solution {v} is not a nonnegative integer")
        out.append(int(v))
    return DualLowWeights(*out, method="moments")


def min_distance(wd: WeightDistribution) -> int:
    weights = wd.nonzero_weights()
    if not weights:
        raise EmptyCode("code has no nonzero codeword")
    return min(weights)


def dual_min_distance_upto3(dlw: DualLowWeights) -> int | str:
    for i, v in enumerate(dlw.values(), start=1):
        if v > 0:
            return i
    return ">3"


def full_space_distribution(n: int, p: int) -> WeightDistribution:
    """Weight distribution of F_p^n itself."""
    return WeightDistribution({j: comb(n, j) * (p - 1) ** j for j in range(n + 1)}, n, n)


def weight(word: Iterable[int]) -> int:
    return int(np.count_nonzero(np.asarray(list(word))))
