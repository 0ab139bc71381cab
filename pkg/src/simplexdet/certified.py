"""Directed-rounding interval arithmetic and certified reals.

Every quantity is carried as a pair ``(lo, hi)`` of MPFR numbers with
``lo`` computed under round-toward-minus-infinity and ``hi`` under
round-toward-plus-infinity, so the true value is always enclosed.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Callable, Optional, Tuple

import gmpy2
from gmpy2 import mpfr

from .errors import BudgetExceeded, ParameterError

DEFAULT_PREC = 128
MAX_PREC = 8192

Iv = Tuple[mpfr, mpfr]


@lru_cache(maxsize=None)
def _contexts(prec: int):
    down = gmpy2.context(precision=prec, round=gmpy2.RoundDown)
    up = gmpy2.context(precision=prec, round=gmpy2.RoundUp)
    return down, up


class Arith:
    """Interval operations at a fixed working precision."""

    __slots__ = ("prec", "D", "U")

    def __init__(self, prec: int = DEFAULT_PREC):
        self.prec = prec
        self.D, self.U = _contexts(prec)

    # constructors
    def const(self, x) -> Iv:
        if isinstance(x, tuple):
            return x
        if isinstance(x, int):
            return self.D.plus(mpfr(x, max(2, x.bit_length()))), self.U.plus(mpfr(x, max(2, x.bit_length())))
        if isinstance(x, Fraction):
            num, den = x.numerator, x.denominator
            a = mpfr(num, max(2, num.bit_length()))
            b = mpfr(den, max(2, den.bit_length()))
            return self.D.div(a, b), self.U.div(a, b)
        if isinstance(x, mpfr):
            return self.D.plus(x), self.U.plus(x)
        raise TypeError(f"cannot enclose {type(x).__name__}")

    def ln2(self) -> Iv:
        return self.D.const_log2(), self.U.const_log2()

    # arithmetic
    def add(self, x: Iv, y: Iv) -> Iv:
        return self.D.add(x[0], y[0]), self.U.add(x[1], y[1])

    def sub(self, x: Iv, y: Iv) -> Iv:
        return self.D.sub(x[0], y[1]), self.U.sub(x[1], y[0])

    def neg(self, x: Iv) -> Iv:
        return -x[1], -x[0]

    def mul(self, x: Iv, y: Iv) -> Iv:
        if x[0] >= 0 and y[0] >= 0:
            return self.D.mul(x[0], y[0]), self.U.mul(x[1], y[1])
        D, U = self.D, self.U
        lo = min(D.mul(x[0], y[0]), D.mul(x[0], y[1]), D.mul(x[1], y[0]), D.mul(x[1], y[1]))
        hi = max(U.mul(x[0], y[0]), U.mul(x[0], y[1]), U.mul(x[1], y[0]), U.mul(x[1], y[1]))
        return lo, hi

    def div(self, x: Iv, y: Iv) -> Iv:
        if y[0] <= 0 <= y[1]:
            raise ZeroDivisionError("divisor interval contains zero")
        D, U = self.D, self.U
        lo = min(D.div(x[0], y[0]), D.div(x[0], y[1]), D.div(x[1], y[0]), D.div(x[1], y[1]))
        hi = max(U.div(x[0], y[0]), U.div(x[0], y[1]), U.div(x[1], y[0]), U.div(x[1], y[1]))
        return lo, hi

    def fsum(self, xs) -> Iv:
        xs = list(xs)
        if not xs:
            return mpfr(0), mpfr(0)
        return self.D.fsum([x[0] for x in xs]), self.U.fsum([x[1] for x in xs])

    # monotone functions
    def log(self, x: Iv) -> Iv:
        if x[0] <= 0:
            raise ValueError("log of an interval reaching zero")
        return self.D.log(x[0]), self.U.log(x[1])

    def log1p(self, x: Iv) -> Iv:
        return self.D.log1p(x[0]), self.U.log1p(x[1])

    def log2(self, x: Iv) -> Iv:
        return self.D.log2(x[0]), self.U.log2(x[1])

    def exp(self, x: Iv) -> Iv:
        return self.D.exp(x[0]), self.U.exp(x[1])

    def exp2(self, x: Iv) -> Iv:
        return self.D.exp2(x[0]), self.U.exp2(x[1])

    def sqrt(self, x: Iv) -> Iv:
        if x[1] < 0:
            raise ValueError("sqrt of a negative interval")
        return self.D.sqrt(max(x[0], mpfr(0))), self.U.sqrt(x[1])

    def scale(self, x: Iv, c: int) -> Iv:
        """Multiply by an exact integer."""
        return self.mul(x, self.const(c))


def fraction_of(x: mpfr) -> Fraction:
    return Fraction(*x.as_integer_ratio())


@dataclass(frozen=True)
class CertifiedReal:
    """Closed enclosure ``[lower, upper]`` of a real number; endpoints are dyadic."""

    lower: Fraction
    upper: Fraction
    precision: int

    @classmethod
    def from_iv(cls, x: Iv, prec: int) -> "CertifiedReal":
        return cls(fraction_of(x[0]), fraction_of(x[1]), prec)

    @classmethod
    def exact(cls, x) -> "CertifiedReal":
        x = Fraction(x)
        return cls(x, x, 0)

    @property
    def width(self) -> Fraction:
        return self.upper - self.lower

    @property
    def mid(self) -> Fraction:
        return (self.lower + self.upper) / 2

    def __float__(self) -> float:
        return float(self.mid)

    def contains(self, x) -> bool:
        return self.lower <= Fraction(x) <= self.upper

    def sign(self) -> Optional[int]:
        """+1 / -1 when decided, 0 for an exact zero, None when the enclosure straddles 0."""
        if self.lower > 0:
            return 1
        if self.upper < 0:
            return -1
        if self.lower == self.upper == 0:
            return 0
        return None

    def compare(self, other) -> Optional[int]:
        if not isinstance(other, CertifiedReal):
            other = CertifiedReal.exact(other)
        if self.lower > other.upper:
            return 1
        if self.upper < other.lower:
            return -1
        if self.lower == self.upper == other.lower == other.upper:
            return 0
        return None

    def ceil(self) -> Optional[int]:
        lo, hi = int(math.ceil(self.lower)), int(math.ceil(self.upper))
        return lo if lo == hi else None

    def floor(self) -> Optional[int]:
        lo, hi = int(math.floor(self.lower)), int(math.floor(self.upper))
        return lo if lo == hi else None

    def __repr__(self) -> str:
        return f"CertifiedReal([{float(self.lower):.17g}, {float(self.upper):.17g}], prec={self.precision})"


def certify(fn: Callable[[Arith], Iv], *, decide: Callable[[CertifiedReal], bool],
            prec: int = DEFAULT_PREC, max_prec: int = MAX_PREC) -> CertifiedReal:
    """Evaluate ``fn`` at doubling precision until ``decide`` accepts the enclosure."""
    while True:
        value = CertifiedReal.from_iv(fn(Arith(prec)), prec)
        if decide(value):
            return value
        if prec >= max_prec:
            raise BudgetExceeded(f"undecided at {prec} bits: {value!r}", limit=max_prec)
        prec *= 2


def certified_sign(fn: Callable[[Arith], Iv], **kw) -> int:
    return certify(fn, decide=lambda v: v.sign() in (1, -1), **kw).sign()


def certified_ceil(fn: Callable[[Arith], Iv], **kw) -> int:
    return certify(fn, decide=lambda v: v.ceil() is not None, **kw).ceil()


def evaluate(fn: Callable[[Arith], Iv], prec: int = DEFAULT_PREC) -> CertifiedReal:
    return CertifiedReal.from_iv(fn(Arith(prec)), prec)


# --- binary entropy -------------------------------------------------------

def _check_unit(x: Fraction) -> Fraction:
    x = Fraction(x)
    if not 0 < x < 1:
        raise ParameterError(f"entropy argument {x} outside (0, 1)")
    return x


def entropy_deficit_series(y: Fraction, terms: Optional[int] = None) -> Tuple[Fraction, Fraction]:
    """Enclose ``sum_{i>=1} y^{2i} / (2i(2i-1))`` for ``|y| < 1``.

    This is ``ln 2 * (1 - h((1-y)/2))``; summing it directly avoids the
    cancellation in ``1 - h`` when ``y`` is tiny.
    """
    y2 = Fraction(y) ** 2
    if y2 >= 1:
        raise ParameterError("series needs |y| < 1")
    if terms is None:
        # each term shrinks by y^2; 2^-200 relative accuracy is plenty
        if y2 == 0:
            return Fraction(0), Fraction(0)
        terms = max(2, math.ceil(200 * math.log(2) / -math.log(float(y2))) + 1) if y2 < Fraction(1, 2) else 4000
    s = Fraction(0)
    p = Fraction(1)
    for i in range(1, terms + 1):
        p *= y2
        s += p / (2 * i * (2 * i - 1))
    n = terms + 1
    tail = p * y2 / ((2 * n) * (2 * n - 1) * (1 - y2))
    return s, s + tail


def entropy_iv(A: Arith, x: Fraction) -> Iv:
    x = _check_unit(x)
    y = 1 - 2 * x
    if abs(y) <= Fraction(1, 2):
        lo, hi = entropy_deficit_series(y)
        deficit = A.div((A.const(lo)[0], A.const(hi)[1]), A.ln2())
        return A.sub((mpfr(1), mpfr(1)), deficit)
    xi, yi = A.const(x), A.const(1 - x)
    nats = A.add(A.mul(xi, A.log(xi)), A.mul(yi, A.log(yi)))
    return A.neg(A.div(nats, A.ln2()))


def entropy(x, prec: int = DEFAULT_PREC) -> CertifiedReal:
    """Certified enclosure of ``h(x) = -x log2 x - (1-x) log2 (1-x)``."""
    x = Fraction(x)
    if x == Fraction(1, 2):
        return CertifiedReal.exact(1)
    return evaluate(lambda A: entropy_iv(A, x), prec)


def entropy_sandwich(x, prec: int = DEFAULT_PREC) -> Tuple[CertifiedReal, CertifiedReal, CertifiedReal]:
    """``(lower, h(x), upper)`` with the quadratic and quartic Taylor bounds on ``(0, 1/2)``."""
    x = _check_unit(Fraction(x))
    if not x < Fraction(1, 2):
        raise ParameterError("the Taylor sandwich is stated on (0, 1/2)")
    y2 = (1 - 2 * x) ** 2
    A = Arith(prec)
    ln2 = A.ln2()
    quad = A.div(A.const(y2 / 2), ln2)
    upper = A.sub((mpfr(1), mpfr(1)), quad)
    quart = A.mul(A.div(A.sub(ln2, A.const(Fraction(1, 2))), ln2), A.const(y2 * y2))
    lower = A.sub(upper, quart)
    return (CertifiedReal.from_iv(lower, prec), entropy(x, prec), CertifiedReal.from_iv(upper, prec))


def check_entropy_sandwich(x, prec: int = DEFAULT_PREC) -> bool:
    """True iff both strict inequalities are certified at ``x``."""
    lo, h, hi = entropy_sandwich(x, prec)
    return lo.upper < h.lower and h.upper < hi.lower
