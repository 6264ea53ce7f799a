"""Exception hierarchy for the package."""

from __future__ import annotations


class TraceCodeError(Exception):
    """Base class for all package errors."""


class NotPrime(TraceCodeError, ValueError):
    pass


class NotMonic(TraceCodeError, ValueError):
    pass


class Reducible(TraceCodeError, ValueError):
    def __init__(self, modulus):
        super().__init__(f"modulus {list(modulus)} is reducible")
        self.modulus = tuple(modulus)


class FieldDivisionByZero(TraceCodeError, ZeroDivisionError):
    pass


class CtxMismatch(TraceCodeError, ValueError):
    pass


class NotPrimitive(TraceCodeError, ValueError):
    pass


class NotADivisor(TraceCodeError, ValueError):
    pass


class InternalError(TraceCodeError, RuntimeError):
    pass


class TooLarge(TraceCodeError, ValueError):
    pass


class AInPrimeField(TraceCodeError, ValueError):
    pass


class BZero(TraceCodeError, ValueError):
    pass


class DegreeTooSmall(TraceCodeError, ValueError):
    pass


class NonIntegerFormula(TraceCodeError, ArithmeticError):
    pass


class NonIntegerFrequency(NonIntegerFormula):
    pass


class NegativeFrequency(TraceCodeError, ArithmeticError):
    pass


class NoQuadraticRelation(TraceCodeError, ValueError):
    pass


class DimensionMismatch(TraceCodeError, RuntimeError):
    pass


class NotABasis(TraceCodeError, ValueError):
    pass


class InconsistentMoments(TraceCodeError, ArithmeticError):
    pass


class OutOfRegime(TraceCodeError, ValueError):
    pass


class EmptyCode(TraceCodeError, ValueError):
    pass


class NotProjective(TraceCodeError, ValueError):
    pass


class BudgetExceeded(TraceCodeError, ValueError):
    pass


class NotASumSet(TraceCodeError, ValueError):
    def __init__(self, h, count, expected, reason: str | None = None):
        super().__init__(
            reason or f"representation count {count} of h={h} differs from {expected}"
        )
        self.h = h
        self.count = count
        self.expected = expected


class NotThreeWeight(TraceCodeError, ValueError):
    pass


class ConfigError(TraceCodeError, ValueError):
    pass
