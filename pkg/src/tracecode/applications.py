"""Minimal codewords for secret sharing, and s-sum sets built from generator columns."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

import numpy as np

from .codes import (
    WeightDistribution,
    all_codewords,
    dual_low_weights_columns,
    enumerate_code,
    generator_matrix,
)
from .errors import BudgetExceeded, EmptyCode, NotASumSet, NotProjective, NotThreeWeight, TooLarge
from .field import FieldCtx, FieldElement

MINIMALITY_BOUND = 3**7
SUMSET_OPS_BUDGET = 10**8


@dataclass(frozen=True)
class ABResult:
    passes: bool
    w_min: int
    w_max: int

    @property
    def ratio(self) -> Fraction:
        return Fraction(self.w_min, self.w_max)


def ab_ratio(wd: WeightDistribution, p: int) -> ABResult:
    """Exact test of w_min / w_max > (p-1)/p."""
    weights = wd.nonzero_weights()
    if not weights:
        raise EmptyCode("no nonzero weight")
    lo, hi = min(weights), max(weights)
    return ABResult(lo * p > hi * (p - 1), lo, hi)


@dataclass
class MinimalityReport:
    w_min: int
    w_max: int
    ab_ratio_passes: bool
    exhaustive_checked: bool
    non_minimal_count: int


def projective_labels(words: np.ndarray, p: int) -> np.ndarray:
    """Label rows so that two rows share a label iff one is an F_p* multiple of the other."""
    words = np.asarray(words, dtype=np.int64) % p
    nz = words != 0
    first = np.where(nz.any(axis=1), nz.argmax(axis=1), 0)
    lead = words[np.arange(len(words)), first]
    inv = np.array([0] + [pow(v, p - 2, p) for v in range(1, p)], dtype=np.int64)
    canon = words * inv[lead][:, None] % p
    return np.unique(canon, axis=0, return_inverse=True)[1].ravel()


def non_minimal_count(words: np.ndarray, p: int) -> int:
    """Nonzero rows whose support contains the support of some non-proportional nonzero row."""
    words = np.asarray(words) % p
    words = words[(words != 0).any(axis=1)]
    if len(words) == 0:
        return 0
    supp = (words != 0).astype(np.int32)
    outside = supp @ (1 - supp).T  # [i, j] = |supp(i) minus supp(j)|
    covered = outside == 0
    labels = projective_labels(words, p)
    covered &= labels[:, None] != labels[None, :]
    return int(np.count_nonzero(covered.any(axis=0)))


def minimal_codewords_exhaustive(
    ctx: FieldCtx, a: FieldElement, bound: int = MINIMALITY_BOUND
) -> MinimalityReport:
    """Pairwise support-cover check over the whole code, plus the sufficient ratio test."""
    if ctx.q > bound:
        raise TooLarge(f"p^m = {ctx.q} exceeds the minimality bound {bound}")
    words = all_codewords(ctx, a, bound=bound)
    w = (words != 0).sum(axis=1)
    wd = WeightDistribution(dict(zip(*np.unique(w, return_counts=True))), words.shape[1], ctx.m)
    ab = ab_ratio(wd, ctx.p)
    return MinimalityReport(ab.w_min, ab.w_max, ab.passes, True, non_minimal_count(words, ctx.p))


def _encode(vectors: np.ndarray, p: int) -> np.ndarray:
    vectors = np.asarray(vectors, dtype=np.int64)
    return vectors @ (p ** np.arange(vectors.shape[1], dtype=np.int64))


def _decode(idx: np.ndarray, p: int, m: int) -> np.ndarray:
    return (np.asarray(idx)[:, None] // p ** np.arange(m)) % p


def build_omega(
    ctx: FieldCtx, a: FieldElement, basis: Sequence[FieldElement] | None = None
) -> list[tuple[int, ...]]:
    """{lambda g_i}: all nonzero multiples of the generator-matrix columns."""
    dlw = dual_low_weights_columns(ctx, a)
    if dlw.a1 or dlw.a2:
        raise NotProjective(f"dual has A1 = {dlw.a1}, A2 = {dlw.a2}")
    cols = generator_matrix(ctx, a, basis).T
    omega = {tuple(int(v) for v in lam * c % ctx.p) for c in cols for lam in range(1, ctx.p)}
    return sorted(omega)


@dataclass
class SumSetReport:
    omega_size: int
    s: int
    sigma0: int | None
    sigma1: int | None
    is_sum_set: bool
    lsss_preconditions: bool = False


def representation_counts(
    omega: Sequence[Sequence[int]], s: int, p: int, m: int, budget: int = SUMSET_OPS_BUDGET
) -> np.ndarray:
    """counts[h] = #{(x_1..x_s) in omega^s : x_1 + ... + x_s = h}, h by base-p index."""
    om = np.asarray(omega, dtype=np.int64).reshape(-1, m)
    size = p**m
    if len(om) * size * (s - 1) > budget:
        raise BudgetExceeded(f"{len(om)} * {size} * {s - 1} exceeds {budget}")
    digits = _decode(np.arange(size), p, m)
    ind = np.zeros(size, dtype=object if s > 4 else np.int64)
    ind[_encode(om, p)] = 1
    counts = ind.copy()
    for _ in range(s - 1):
        nxt = np.zeros_like(counts)
        for x in om:
            nxt += counts[_encode((digits - x) % p, p)]
        counts = nxt
    return counts


def representation_counts_pairs(omega: Sequence[Sequence[int]], p: int, m: int) -> np.ndarray:
    """s = 3 by brute force: for each (x1, x2) test membership of h - x1 - x2, for every h."""
    om = np.asarray(omega, dtype=np.int64).reshape(-1, m)
    size = p**m
    member = np.zeros(size, dtype=bool)
    member[_encode(om, p)] = True
    digits = _decode(np.arange(size), p, m)
    counts = np.zeros(size, dtype=np.int64)
    for x1 in om:
        for x2 in om:
            counts += member[_encode((digits - x1 - x2) % p, p)]
    return counts


def sum_set_check(
    omega: Sequence[Sequence[int]], s: int, p: int, m: int, strict: bool = True,
    budget: int = SUMSET_OPS_BUDGET, method: str = "convolution",
) -> SumSetReport:
    """Check that representation counts depend only on membership of h in omega."""
    if s <= 1 or s % 2 == 0:
        raise ValueError(f"s = {s} must be odd and > 1")
    om = [tuple(int(v) % p for v in x) for x in omega]
    members = set(om)
    for x in om:
        for lam in range(2, p):
            y = tuple(lam * v % p for v in x)
            if y not in members:
                if strict:
                    raise NotASumSet(y, 0, 1, reason=f"{y} = {lam}*{x} is missing from the set")
                return SumSetReport(len(members), s, None, None, False)
    if method == "pairs":
        if s != 3:
            raise ValueError("the pair method handles s = 3 only")
        counts = representation_counts_pairs(sorted(members), p, m)
    else:
        counts = representation_counts(sorted(members), s, p, m, budget)

    inside = np.zeros(p**m, dtype=bool)
    inside[_encode(np.array(sorted(members)).reshape(-1, m), p)] = True
    sigma = {}
    for flag in (True, False):
        idx = np.nonzero(inside == flag)[0]
        idx = idx[idx != 0]
        if len(idx) == 0:
            sigma[flag] = None
            continue
        vals = counts[idx]
        first = int(vals[0])
        bad = np.nonzero(vals != first)[0]
        if len(bad):
            h = tuple(int(v) for v in _decode(idx[bad[:1]], p, m)[0])
            if strict:
                raise NotASumSet(h, int(vals[bad[0]]), first)
            return SumSetReport(len(members), s, None, None, False)
        sigma[flag] = first
    return SumSetReport(len(members), s, sigma[True], sigma[False], True)


def lsss_preconditions(wd: WeightDistribution, n: int, p: int) -> bool:
    """Three weights w1 < w2 < w3 with w2 = n(p-1)/p and w1 + w3 = 2n(p-1)/p."""
    weights = sorted(wd.nonzero_weights())
    if len(weights) != 3:
        raise NotThreeWeight(f"weights {weights}")
    w1, w2, w3 = weights
    mid = Fraction(n * (p - 1), p)
    return w2 == mid and w1 + w3 == 2 * mid


def projective_representatives(omega: Sequence[Sequence[int]], p: int) -> list[tuple[int, ...]]:
    """One vector per projective class: the multiple whose first nonzero entry is 1."""
    reps = set()
    for x in omega:
        lead = next(v for v in x if v % p)
        inv = pow(lead, p - 2, p)
        reps.add(tuple(v * inv % p for v in x))
    return sorted(reps)


def sumset_pipeline(ctx: FieldCtx, a: FieldElement, s: int = 3, strict: bool = True) -> SumSetReport:
    """Omega from the code's columns, the three-weight preconditions, then the sum-set check."""
    omega = build_omega(ctx, a)
    wd, _ = enumerate_code(ctx, a)
    report = sum_set_check(omega, s, ctx.p, ctx.m, strict=strict)
    try:
        report.lsss_preconditions = lsss_preconditions(wd, wd.n, ctx.p)
    except NotThreeWeight:
        report.lsss_preconditions = False
    return report
