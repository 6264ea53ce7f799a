"""Exact arithmetic in GF(p^m) in the polynomial basis.

Elements are coefficient tuples ``(c_0, ..., c_{m-1})`` over Z_p in ascending
degree, reduced modulo a monic irreducible polynomial.  Scalar arithmetic is
pure Python; bulk work (enumerating codes, character sums) goes through
:class:`FieldTables`, a lazily built set of numpy lookup tables indexed by the
integer encoding ``sum(c_i * p**i)``.
"""

from __future__ import annotations

import itertools
import threading
from typing import Iterator, Sequence

import numpy as np

from .errors import (
    CtxMismatch,
    FieldDivisionByZero,
    InternalError,
    NotADivisor,
    NotMonic,
    NotPrime,
    NotPrimitive,
    Reducible,
    TooLarge,
)

TABLE_LIMIT = 2**20


# -- integer helpers ---------------------------------------------------------

def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    f = 3
    while f * f <= n:
        if n % f == 0:
            return False
        f += 2
    return True


def prime_factors(n: int) -> list[int]:
    """Distinct prime factors of ``n`` by trial division."""
    out = []
    f = 2
    while f * f <= n:
        if n % f == 0:
            out.append(f)
            while n % f == 0:
                n //= f
        f += 1
    if n > 1:
        out.append(n)
    return out


def divisors(n: int) -> list[int]:
    return [d for d in range(1, n + 1) if n % d == 0]


# -- polynomials over Z_p (ascending coefficient tuples) ---------------------

def _trim(c: list[int]) -> list[int]:
    while c and c[-1] == 0:
        c.pop()
    return c


def poly_divmod_rem(a: Sequence[int], b: Sequence[int], p: int) -> list[int]:
    """Remainder of ``a`` modulo ``b`` over Z_p (``b`` nonzero)."""
    a = _trim([x % p for x in a])
    b = _trim([x % p for x in b])
    if not b:
        raise ZeroDivisionError("polynomial division by zero")
    inv_lead = pow(b[-1], p - 2, p)
    db = len(b) - 1
    while len(a) - 1 >= db and a:
        shift = len(a) - 1 - db
        factor = a[-1] * inv_lead % p
        for i, bc in enumerate(b):
            a[shift + i] = (a[shift + i] - factor * bc) % p
        _trim(a)
    return a


def poly_mulmod(a: Sequence[int], b: Sequence[int], f: Sequence[int], p: int) -> list[int]:
    prod = [0] * (len(a) + len(b) - 1) if a and b else []
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                prod[i + j] += x * y
    return poly_divmod_rem(prod, f, p)


def poly_powmod(a: Sequence[int], e: int, f: Sequence[int], p: int) -> list[int]:
    result = [1]
    base = poly_divmod_rem(a, f, p)
    while e:
        if e & 1:
            result = poly_mulmod(result, base, f, p)
        base = poly_mulmod(base, base, f, p)
        e >>= 1
    return result


def poly_gcd(a: Sequence[int], b: Sequence[int], p: int) -> list[int]:
    a = _trim([x % p for x in a])
    b = _trim([x % p for x in b])
    while b:
        a, b = b, poly_divmod_rem(a, b, p)
    if a:
        inv = pow(a[-1], p - 2, p)
        a = [x * inv % p for x in a]
    return a


def is_irreducible(f: Sequence[int], p: int) -> bool:
    """Rabin test: gcd(f, x^(p^i) - x) = 1 for all i <= deg/2."""
    f = _trim([x % p for x in f])
    m = len(f) - 1
    if m < 1:
        return False
    if m == 1:
        return True
    xp = [0, 1]
    for _ in range(m // 2):
        xp = poly_powmod(xp, p, f, p)
        diff = list(xp) + [0] * max(0, 2 - len(xp))
        diff[1] = (diff[1] - 1) % p
        if len(poly_gcd(f, diff, p)) > 1:
            return False
    return True


def smallest_irreducible(p: int, m: int, primitive: bool = False) -> tuple[int, ...]:
    """Lexicographically smallest (ascending tuple) monic irreducible of degree m.

    With ``primitive=True`` the class of x must also generate the unit group.
    """
    for low in itertools.product(range(p), repeat=m):
        cand = low + (1,)
        if is_irreducible(cand, p) and (not primitive or FieldCtx(p, m, cand).check_generator()):
            return cand
    raise InternalError(f"no irreducible polynomial of degree {m} over Z_{p}")


def parse_modulus(text: str) -> tuple[int, ...]:
    """Parse ``"2,2,2,0,1,2,0,0,1"`` into an ascending coefficient tuple."""
    return tuple(int(tok) for tok in text.replace(" ", "").split(",") if tok)


def format_modulus(coeffs: Sequence[int]) -> str:
    return ",".join(str(c) for c in coeffs)


# -- field context -----------------------------------------------------------

class FieldCtx:
    """Immutable description of GF(p^m)."""

    def __init__(self, p: int, m: int, modulus: Sequence[int]):
        self.p = p
        self.m = m
        self.modulus = tuple(modulus)
        self.q = p**m
        self.generator_order_checked = False
        self._beta_primitive: bool | None = None
        self._tables: FieldTables | None = None
        self._lock = threading.Lock()

    def __repr__(self):
        return f"FieldCtx(p={self.p}, m={self.m}, modulus={list(self.modulus)})"

    def __eq__(self, other):
        return (
            isinstance(other, FieldCtx)
            and (self.p, self.m, self.modulus) == (other.p, other.m, other.modulus)
        )

    def __hash__(self):
        return hash((self.p, self.m, self.modulus))

    def __getstate__(self):
        return {"p": self.p, "m": self.m, "modulus": self.modulus}

    def __setstate__(self, state):
        self.__init__(state["p"], state["m"], state["modulus"])

    # element constructors

    def reduce(self, coeffs: Sequence[int]) -> FieldElement:
        r = poly_divmod_rem(coeffs, self.modulus, self.p)
        return FieldElement(self, tuple(r) + (0,) * (self.m - len(r)))

    def elem(self, coeffs: Sequence[int]) -> FieldElement:
        coeffs = tuple(int(c) for c in coeffs)
        if len(coeffs) > self.m:
            return self.reduce(coeffs)
        return FieldElement(self, tuple(c % self.p for c in coeffs) + (0,) * (self.m - len(coeffs)))

    def scalar(self, c: int) -> FieldElement:
        return FieldElement(self, (c % self.p,) + (0,) * (self.m - 1))

    def from_index(self, idx: int) -> FieldElement:
        idx = int(idx)
        if not 0 <= idx < self.q:
            raise ValueError(f"index {idx} outside [0, {self.q})")
        c = []
        for _ in range(self.m):
            idx, r = divmod(idx, self.p)
            c.append(r)
        return FieldElement(self, tuple(c))

    @property
    def zero(self) -> FieldElement:
        return FieldElement(self, (0,) * self.m)

    @property
    def one(self) -> FieldElement:
        return self.scalar(1)

    @property
    def beta(self) -> FieldElement:
        """The class of x modulo the modulus."""
        return self.reduce([0, 1])

    # primitivity

    def is_primitive(self, x: FieldElement) -> bool:
        if x.is_zero():
            return False
        order = self.q - 1
        return all(x ** (order // r) != self.one for r in prime_factors(order)) if order > 1 else True

    def check_generator(self) -> bool:
        """Verify (once) that beta generates GF(p^m)*; result is cached."""
        with self._lock:
            if self._beta_primitive is None:
                self._beta_primitive = self.is_primitive(self.beta)
                self.generator_order_checked = True
        return self._beta_primitive

    # lookup tables

    @property
    def tables(self) -> FieldTables:
        if self._tables is None:
            if self.q > TABLE_LIMIT:
                raise TooLarge(f"p^m = {self.q} exceeds table limit {TABLE_LIMIT}")
            primitive = self.check_generator()
            with self._lock:
                if self._tables is None:
                    self._tables = FieldTables(self, primitive)
        return self._tables


class FieldElement:
    """Canonical residue class in GF(p^m); equality is structural."""

    __slots__ = ("ctx", "coeffs")

    def __init__(self, ctx: FieldCtx, coeffs: tuple[int, ...]):
        self.ctx = ctx
        self.coeffs = coeffs

    def __repr__(self):
        return f"FieldElement({list(self.coeffs)})"

    def __eq__(self, other):
        if isinstance(other, int):
            other = self.ctx.scalar(other)
        if not isinstance(other, FieldElement):
            return NotImplemented
        return self.coeffs == other.coeffs and self.ctx == other.ctx

    def __hash__(self):
        return hash(self.coeffs)

    @property
    def index(self) -> int:
        p = self.ctx.p
        return sum(c * p**i for i, c in enumerate(self.coeffs))

    def __int__(self):
        return self.index

    def is_zero(self) -> bool:
        return not any(self.coeffs)

    def in_prime_field(self) -> bool:
        return not any(self.coeffs[1:])

    def _coerce(self, other) -> FieldElement:
        if isinstance(other, int):
            return self.ctx.scalar(other)
        if not isinstance(other, FieldElement):
            raise TypeError(f"cannot combine FieldElement with {type(other).__name__}")
        if other.ctx != self.ctx:
            raise CtxMismatch(f"{self.ctx} vs {other.ctx}")
        return other

    def __add__(self, other):
        other = self._coerce(other)
        p = self.ctx.p
        return FieldElement(self.ctx, tuple((a + b) % p for a, b in zip(self.coeffs, other.coeffs)))

    __radd__ = __add__

    def __neg__(self):
        p = self.ctx.p
        return FieldElement(self.ctx, tuple(-a % p for a in self.coeffs))

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return self._coerce(other) - self

    def __mul__(self, other):
        other = self._coerce(other)
        return self.ctx.reduce(
            poly_mulmod(self.coeffs, other.coeffs, self.ctx.modulus, self.ctx.p)
        )

    __rmul__ = __mul__

    def inverse(self) -> FieldElement:
        if self.is_zero():
            raise FieldDivisionByZero("inverse of zero")
        return self ** (self.ctx.q - 2)

    def __truediv__(self, other):
        return self * self._coerce(other).inverse()

    def __rtruediv__(self, other):
        return self._coerce(other) * self.inverse()

    def __pow__(self, e: int):
        e = int(e)
        if e < 0:
            return self.inverse() ** (-e)
        if self.is_zero():
            return self.ctx.one if e == 0 else self
        e %= self.ctx.q - 1
        result, base = self.ctx.one, self
        while e:
            if e & 1:
                result = result * base
            base = base * base
            e >>= 1
        return result


# -- module-level operations -------------------------------------------------

def make_field(
    p: int, m: int, modulus: Sequence[int] | str | None = None, primitive: bool = False
) -> FieldCtx:
    """Validate parameters and build a field context.

    Without a modulus the lexicographically smallest monic irreducible of
    degree ``m`` is chosen (smallest primitive one if ``primitive``).
    """
    if not is_prime(p) or p == 2:
        raise NotPrime(f"p = {p} is not an odd prime")
    if m < 1:
        raise ValueError(f"extension degree must be >= 1, got {m}")
    if modulus is None:
        modulus = smallest_irreducible(p, m, primitive)
    elif isinstance(modulus, str):
        modulus = parse_modulus(modulus)
    modulus = tuple(int(c) for c in modulus)
    if len(modulus) != m + 1:
        raise ValueError(f"modulus needs {m + 1} coefficients, got {len(modulus)}")
    if any(not 0 <= c < p for c in modulus):
        raise ValueError(f"modulus coefficients must lie in [0, {p - 1}]")
    if modulus[-1] != 1:
        raise NotMonic(f"modulus {list(modulus)} is not monic")
    if not is_irreducible(modulus, p):
        raise Reducible(modulus)
    return FieldCtx(p, m, modulus)


def add(ctx: FieldCtx, x: FieldElement, y: FieldElement) -> FieldElement:
    _check(ctx, x, y)
    return x + y


def negate(ctx: FieldCtx, x: FieldElement) -> FieldElement:
    _check(ctx, x)
    return -x


def multiply(ctx: FieldCtx, x: FieldElement, y: FieldElement) -> FieldElement:
    _check(ctx, x, y)
    return x * y


def invert(ctx: FieldCtx, x: FieldElement) -> FieldElement:
    _check(ctx, x)
    return x.inverse()


def power(ctx: FieldCtx, x: FieldElement, e: int) -> FieldElement:
    _check(ctx, x)
    return x**e


def _check(ctx, *xs):
    for x in xs:
        if x.ctx != ctx:
            raise CtxMismatch(f"element of {x.ctx} used with {ctx}")


def element_from_exponent(ctx: FieldCtx, k: int) -> FieldElement:
    """beta**k where beta is the class of x; beta must be primitive."""
    if not ctx.check_generator():
        raise NotPrimitive(
            f"x is not a generator modulo {list(ctx.modulus)}; supply another modulus "
            "or give the element by coefficients"
        )
    k %= ctx.q - 1
    if ctx._tables is not None:
        return ctx.from_index(int(ctx.tables.exp[k]))
    return ctx.beta**k


def frobenius(x: FieldElement, times: int = 1) -> FieldElement:
    for _ in range(times):
        x = x**x.ctx.p
    return x


def trace(ctx: FieldCtx, x: FieldElement) -> int:
    """Absolute trace as the sum of the m Frobenius conjugates."""
    _check(ctx, x)
    total, conj = ctx.zero, x
    for _ in range(ctx.m):
        total = total + conj
        conj = conj**ctx.p
    if not total.in_prime_field():
        raise InternalError(f"trace of {x} left the prime field: {total}")
    return total.coeffs[0]


def in_subfield(ctx: FieldCtx, x: FieldElement, s: int) -> bool:
    """True iff x lies in GF(p^s), i.e. x^(p^s) = x."""
    if s < 1 or ctx.m % s:
        raise NotADivisor(f"{s} does not divide {ctx.m}")
    _check(ctx, x)
    return frobenius(x, s) == x


def enumerate_elements(ctx: FieldCtx) -> Iterator[FieldElement]:
    """All p^m elements, coefficient vectors in ascending lexicographic order."""
    for idx in range(ctx.q):
        yield ctx.from_index(idx)


def minimal_subfield_degree(ctx: FieldCtx, x: FieldElement) -> int:
    """Smallest s | m with x in GF(p^s)."""
    for s in divisors(ctx.m):
        if in_subfield(ctx, x, s):
            return s
    raise InternalError("element not in its own field")


# -- vectorised tables -------------------------------------------------------

class FieldTables:
    """numpy lookup tables over integer-encoded elements.

    ``exp``/``log`` are taken with respect to ``gen``, which is beta when beta
    is primitive and otherwise the primitive element of smallest index.
    """

    def __init__(self, ctx: FieldCtx, beta_primitive: bool):
        p, m, q = ctx.p, ctx.m, ctx.q
        self.ctx = ctx
        self.weights = p ** np.arange(m, dtype=np.int64)
        idx = np.arange(q, dtype=np.int64)
        self.digits = (idx[:, None] // self.weights[None, :]) % p

        if beta_primitive:
            gen = ctx.beta
        else:
            gen = next(x for x in enumerate_elements(ctx) if ctx.is_primitive(x))
        self.gen = gen
        self.exp = self._power_sequence(gen)
        self.log = np.full(q, -1, dtype=np.int64)
        self.log[self.exp] = np.arange(q - 1, dtype=np.int64)
        if (self.log[1:] < 0).any():
            raise InternalError("generator does not reach every nonzero element")

        # trace is F_p-linear: Tr(sum c_i x^i) = sum c_i Tr(x^i)
        basis_tr = np.array([trace(ctx, ctx.elem([0] * i + [1])) for i in range(m)], dtype=np.int64)
        self.trace = (self.digits @ basis_tr) % p
        self.eta = np.where(self.log % 2 == 0, 1, -1).astype(np.int64)
        self.eta[0] = 0

    def _power_sequence(self, gen: FieldElement) -> np.ndarray:
        ctx = self.ctx
        p, m = ctx.p, ctx.m
        # multiplication by gen as an F_p-linear map on coefficient vectors
        cols = [(gen * ctx.elem([0] * i + [1])).coeffs for i in range(m)]
        mat = [[cols[j][i] for j in range(m)] for i in range(m)]
        out = np.empty(ctx.q - 1, dtype=np.int64)
        vec = [1] + [0] * (m - 1)
        w = [p**i for i in range(m)]
        for k in range(ctx.q - 1):
            out[k] = sum(c * wi for c, wi in zip(vec, w))
            vec = [sum(r[j] * vec[j] for j in range(m)) % p for r in mat]
        return out

    def encode(self, digits: np.ndarray) -> np.ndarray:
        return (np.asarray(digits) % self.ctx.p) @ self.weights

    def add(self, x, y):
        return self.encode(self.digits[x] + self.digits[y])

    def sub(self, x, y):
        return self.encode(self.digits[x] - self.digits[y])

    def neg(self, x):
        return self.encode(-self.digits[x])

    def scale(self, lam: int, x):
        """Multiply by a prime-field scalar."""
        return self.encode(lam * self.digits[x])

    def mul(self, x, y):
        x = np.asarray(x)
        y = np.asarray(y)
        prod = self.exp[(self.log[x] + self.log[y]) % (self.ctx.q - 1)]
        return np.where((x == 0) | (y == 0), 0, prod)

    def inv(self, x):
        x = np.asarray(x)
        if (x == 0).any():
            raise FieldDivisionByZero("inverse of zero")
        return self.exp[(-self.log[x]) % (self.ctx.q - 1)]

    def square(self, x):
        return self.mul(x, x)

    def scalar_index(self, c: int) -> int:
        return c % self.ctx.p
