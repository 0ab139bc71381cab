"""Dense integer polynomials: exact sign analysis on ``(0, 1)``.

Polynomials are lists of ints, lowest degree first.  Real roots in ``(0, 1)``
are isolated by Descartes bisection (the Vincent-Collins-Akritas scheme),
after reducing to the square-free part; every decision is exact.
"""

from __future__ import annotations

from fractions import Fraction
from math import comb
from typing import List, Optional, Sequence, Tuple

import gmpy2
from gmpy2 import mpz

from .errors import BudgetExceeded

Poly = List[int]

# 2^127 - 1 is prime
_MODULUS = (1 << 127) - 1


def trim(p: Sequence[int]) -> Poly:
    p = list(p)
    while p and p[-1] == 0:
        p.pop()
    return p


def degree(p: Sequence[int]) -> int:
    return len(trim(p)) - 1


def derivative(p: Sequence[int]) -> Poly:
    return [i * c for i, c in enumerate(p)][1:]


def _homogeneous_value(p: Sequence[int], num: int, den: int):
    """``den^deg * p(num/den)`` as an exact integer (Horner, homogenised)."""
    num, den = mpz(num), mpz(den)
    acc = mpz(0)
    pw = mpz(1)
    for c in reversed(p):
        acc = acc * num + mpz(c) * pw
        pw *= den
    return acc


def evaluate(p: Sequence[int], x) -> Fraction:
    x = Fraction(x)
    if not p:
        return Fraction(0)
    return Fraction(int(_homogeneous_value(p, x.numerator, x.denominator)), x.denominator ** (len(p) - 1))


def sign_at(p: Sequence[int], x) -> int:
    """Exact sign of ``p(x)`` for rational ``x``."""
    x = Fraction(x)
    v = _homogeneous_value(p, x.numerator, x.denominator)
    return (v > 0) - (v < 0)


def taylor_shift(p: Sequence[int]) -> Poly:
    """Coefficients of ``p(x + 1)``."""
    a = [mpz(c) for c in p]
    n = len(a)
    for i in range(n - 1):
        for j in range(n - 2, i - 1, -1):
            a[j] += a[j + 1]
    return a


def _variations(coeffs) -> int:
    v = 0
    last = 0
    for c in coeffs:
        if c:
            s = 1 if c > 0 else -1
            if last and s != last:
                v += 1
            last = s
    return v


def descartes_bound_01(p: Sequence[int]) -> int:
    """Sign variations of ``(1+x)^deg p(1/(1+x))``: bounds roots in ``(0, 1)``, exact for 0 and 1."""
    return _variations(taylor_shift(list(reversed(p))))


def _halve(p):
    # 2^deg * p(x/2)
    n = len(p) - 1
    return [c << (n - i) for i, c in enumerate(p)]


def _content(p) -> int:
    g = mpz(0)
    for c in p:
        g = gmpy2.gcd(g, c)
        if g == 1:
            break
    return g


def _primitive(p):
    g = _content(p)
    return [c // g for c in p] if g > 1 else list(p)


def isolate_01(p: Sequence[int], max_nodes: int = 200000) -> Tuple[List[Tuple[Fraction, Fraction]], List[Fraction]]:
    """Isolate the distinct roots of a square-free ``p`` in ``(0, 1)``.

    Returns ``(intervals, exact_roots)``: each open interval holds exactly one
    root.  An end of an interval may coincide with one of the exact roots.
    """
    p = trim(p)
    intervals, exact = [], []
    if len(p) <= 1:
        return intervals, exact
    # (poly on (0,1) after rescaling, left end c/2^j)
    stack = [([mpz(c) for c in p], 0, 0)]
    nodes = 0
    while stack:
        q, c, j = stack.pop()
        nodes += 1
        if nodes > max_nodes:
            raise BudgetExceeded("root isolation node budget exhausted", limit=max_nodes)
        v = descartes_bound_01(q)
        if v == 0:
            continue
        if v == 1:
            intervals.append((Fraction(c, 1 << j), Fraction(c + 1, 1 << j)))
            continue
        left = _primitive(_halve(q))
        right = _primitive(taylor_shift(left))
        if right[0] == 0:
            exact.append(Fraction(2 * c + 1, 1 << (j + 1)))
            right = right[1:]
        stack.append((right, 2 * c + 1, j + 1))
        stack.append((left, 2 * c, j + 1))
    intervals.sort()
    exact.sort()
    return intervals, exact


# --- gcd -----------------------------------------------------------------------

def _mod_poly(p, mod):
    return trim([c % mod for c in p])


def _mod_gcd_degree(a, b, mod=_MODULUS) -> int:
    a, b = _mod_poly(a, mod), _mod_poly(b, mod)
    while b:
        inv = pow(int(b[-1]), -1, mod)
        while len(a) >= len(b):
            if a[-1]:
                f = a[-1] * inv % mod
                off = len(a) - len(b)
                for i, c in enumerate(b):
                    a[off + i] = (a[off + i] - f * c) % mod
            a.pop()
            a = trim(a)
        a, b = b, a
    return len(a) - 1


def _pseudo_rem(a, b):
    a = list(a)
    lb = b[-1]
    while len(a) >= len(b) and a:
        f = a[-1]
        off = len(a) - len(b)
        a = [c * lb for c in a]
        for i, c in enumerate(b):
            a[off + i] -= f * c
        a = trim(a)
    return a


def exact_gcd(a: Sequence[int], b: Sequence[int]) -> Poly:
    """Primitive gcd over the integers (primitive pseudo-remainder sequence)."""
    a, b = _primitive(trim([mpz(c) for c in a])), _primitive(trim([mpz(c) for c in b]))
    while b:
        r = _pseudo_rem(a, b)
        a, b = b, (_primitive(r) if r else [])
    if a and a[-1] < 0:
        a = [-c for c in a]
    return a


def exact_div(a: Sequence[int], b: Sequence[int]) -> Poly:
    a = [mpz(c) for c in trim(a)]
    b = trim(b)
    out = [mpz(0)] * (len(a) - len(b) + 1)
    for i in range(len(out) - 1, -1, -1):
        q, r = divmod(a[i + len(b) - 1], b[-1])
        if r:
            raise ArithmeticError("inexact polynomial division")
        out[i] = q
        for j, c in enumerate(b):
            a[i + j] -= q * c
    if any(trim(a)):
        raise ArithmeticError("inexact polynomial division")
    return out


def squarefree_part(p: Sequence[int]) -> Poly:
    p = trim([mpz(c) for c in p])
    dp = derivative(p)
    if not dp:
        return _primitive(p)
    lead = p[-1] * len(dp)
    if lead % _MODULUS and _mod_gcd_degree(p, dp) == 0:
        # a coprime image modulo a prime not dividing the leading terms certifies coprimality
        return _primitive(p)
    g = exact_gcd(p, dp)
    return _primitive(exact_div(p, g)) if len(g) > 1 else _primitive(p)


def _multiplicity(p, r: Fraction) -> int:
    m = 0
    q = list(p)
    while q and sign_at(q, r) == 0:
        m += 1
        q = derivative(q)
    return m


def _side_sign(sqf, x: Fraction, right: bool) -> int:
    # sign of a square-free poly just to the right (left) of x
    s = sign_at(sqf, x)
    if s:
        return s
    s = sign_at(derivative(sqf), x)
    return s if right else -s


def _clear_endpoints(sqf, a: Fraction, b: Fraction):
    """Shrink an isolating interval until neither end is a root; None if the root is hit exactly."""
    while sign_at(sqf, a) == 0 or sign_at(sqf, b) == 0:
        m = (a + b) / 2
        sm = sign_at(sqf, m)
        if sm == 0:
            return m
        if _side_sign(sqf, a, True) != sm:
            b = m
        else:
            a = m
    return a, b


def odd_roots_01(p: Sequence[int], max_nodes: int = 200000) -> List[Tuple[Fraction, Fraction]]:
    """Brackets of the roots of ``p`` in ``(0, 1)`` where ``p`` changes sign."""
    p = trim(p)
    sqf = squarefree_part(p)
    intervals, exact = isolate_01(sqf, max_nodes)
    out = []
    for a, b in intervals:
        iv = _clear_endpoints(sqf, a, b)
        if isinstance(iv, Fraction):
            exact.append(iv)
        elif sign_at(p, iv[0]) * sign_at(p, iv[1]) < 0:
            out.append(iv)
    out += [(r, r) for r in exact if _multiplicity(p, r) % 2]
    return sorted(out)


def nonnegative_on_01(p: Sequence[int], max_nodes: int = 200000) -> bool:
    """Exact decision of ``p >= 0`` on ``[0, 1]``."""
    p = trim(p)
    if not p:
        return True
    if odd_roots_01(p, max_nodes):
        return False
    # constant sign on (0, 1): probe a point that is not a root
    for den in range(2, 64):
        s = sign_at(p, Fraction(1, den))
        if s:
            return s > 0
    raise ArithmeticError("could not find a non-root probe point")


def count_roots_01(p: Sequence[int]) -> int:
    """Number of distinct roots in the open interval ``(0, 1)``."""
    iv, ex = isolate_01(squarefree_part(p))
    return len(iv) + len(ex)


# --- polynomial constructions --------------------------------------------------

def binomial_row(n: int) -> Poly:
    return [comb(n, i) for i in range(n + 1)]


def poly_mul(a: Sequence[int], b: Sequence[int]) -> Poly:
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] += x * y
    return out


def one_minus_x_power(n: int) -> Poly:
    return [(-1) ** i * comb(n, i) for i in range(n + 1)]
