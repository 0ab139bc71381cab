"""Certified nonnegativity of sparse sums on ``[0, 1]``.

A target is ``g(x) = sum_j c_j * phi_j(x)`` where each ``phi_j`` is ``x^e`` or
``(1+x)^e``.  Every ``phi_j`` is nondecreasing and log-convex in
``s = ln x``, so the positive part ``L(s) = ln sum_{c>0}`` and the negative
part ``M(s) = ln sum_{c<0} |c| phi`` are both convex.  On a node
``[a, b]`` a tangent of ``L`` minus the chord of ``M`` is a linear lower
bound of ``L - M``; it is checked at the two ends.  The bound is tight
over long stretches where one term dominates each side, which is what keeps
the node count small even for exponents in the hundreds of millions.

Near ``x = 0`` the plain grouping bound ``P(0) - N(b)`` is used.  Endpoints
where ``g`` vanishes exactly are handled by moving to the derivative.

All arithmetic is directed-rounding MPFR in the log domain, so nothing
underflows.
"""

from __future__ import annotations

import heapq
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Tuple

from gmpy2 import mpfr

from .certified import Arith, DEFAULT_PREC, Iv

X = "x"
ONE_PLUS_X = "1+x"

Term = Tuple[Fraction, str, int]  # (coefficient, base, exponent)

EXACT_BIT_LIMIT = 1 << 21


@dataclass
class PositivityResult:
    """Outcome of a nonnegativity certification.

    ``status`` is True (certified ``g >= 0`` on ``[0, 1]``), False (certified
    negative value at ``witness``) or None (budget exhausted).
    """

    status: Optional[bool]
    nodes: int
    precision: int
    witness: Optional[Fraction] = None
    reason: str = ""

    def __bool__(self):
        raise TypeError("use .status; the result is three-valued")


def normalize(terms: Sequence[Term]) -> List[Term]:
    acc: Dict[Tuple[str, int], Fraction] = {}
    for c, base, e in terms:
        if base not in (X, ONE_PLUS_X) or e < 0:
            raise ValueError(f"bad term {(c, base, e)}")
        key = (base, e)
        acc[key] = acc.get(key, Fraction(0)) + Fraction(c)
    return [(c, b, e) for (b, e), c in sorted(acc.items()) if c != 0]


def derivative(terms: Sequence[Term]) -> List[Term]:
    return normalize([(c * e, b, e - 1) for c, b, e in terms if e > 0])


def value_at_zero(terms: Sequence[Term]) -> Fraction:
    return sum((c for c, b, e in terms if b == ONE_PLUS_X or e == 0), Fraction(0))


def value_at_one(terms: Sequence[Term]) -> Optional[Fraction]:
    """Exact ``g(1)``, or None when the powers of two would be too large to form.

    Power-of-two denominators are folded into the exponent first, so a term
    like ``2^-n (1+x)^n`` costs nothing however large ``n`` is.
    """
    parts = []
    for c, b, e in terms:
        den = c.denominator
        s = (den & -den).bit_length() - 1
        parts.append((c.numerator, den >> s, (e if b == ONE_PLUS_X else 0) - s))
    if not parts:
        return Fraction(0)
    low = min(sh for _, _, sh in parts)
    if max(sh for _, _, sh in parts) - low > EXACT_BIT_LIMIT or abs(low) > EXACT_BIT_LIMIT:
        return None
    total = sum((Fraction(num << (sh - low), odd) for num, odd, sh in parts), Fraction(0))
    return total * 2**low if low >= 0 else total / 2**-low


class _Side:
    """One sign group: positive coefficients only."""

    __slots__ = ("terms", "log_coef")

    def __init__(self, terms, A: Arith):
        self.terms = terms
        self.log_coef = [A.log(A.const(c)) for c, _, _ in terms]

    def at_zero(self) -> Fraction:
        return value_at_zero(self.terms)

    def evaluate(self, A: Arith, lnx: Iv, ln1px: Iv, ratio: Iv):
        """Return (ln S, d ln S / d ln x) enclosures at one point ``x > 0``.

        ``ratio`` encloses ``x / (1 + x)``.
        """
        D, U = A.D, A.U
        logs = []
        for (c, b, e), lc in zip(self.terms, self.log_coef):
            if e == 0:
                logs.append(lc)
                continue
            base = lnx if b == X else ln1px
            ee = A.const(e)
            logs.append(A.add(lc, A.mul(ee, base)))
        shift = max(l[0] for l in logs)
        den_lo, den_hi, num_lo, num_hi = [], [], [], []
        for (c, b, e), l in zip(self.terms, logs):
            w_lo = D.exp(D.sub(l[0], shift))
            w_hi = U.exp(U.sub(l[1], shift))
            den_lo.append(w_lo)
            den_hi.append(w_hi)
            if e == 0:
                continue
            if b == X:
                slope = (mpfr(e), mpfr(e)) if e.bit_length() < A.prec else A.const(e)
            else:
                slope = A.mul(A.const(e), ratio)
            num_lo.append(D.mul(slope[0], w_lo))
            num_hi.append(U.mul(slope[1], w_hi))
        den = (D.fsum(den_lo), U.fsum(den_hi))
        num = (D.fsum(num_lo) if num_lo else mpfr(0), U.fsum(num_hi) if num_hi else mpfr(0))
        log_s = A.add((shift, shift), A.log(den))
        return log_s, A.div(num, den)


class _Problem:
    """Certify ``g >= 0`` on a subinterval of ``[0, 1]`` for one term list."""

    def __init__(self, terms: Sequence[Term], A: Arith, depth: int = 0):
        self.A = A
        self.terms = normalize(terms)
        self.depth = depth
        self.pos = _Side([(c, b, e) for c, b, e in self.terms if c > 0], A)
        self.neg = _Side([(-c, b, e) for c, b, e in self.terms if c < 0], A)
        self.g0 = value_at_zero(self.terms)
        self.g1 = value_at_one(self.terms)
        self.cache: Dict[Fraction, tuple] = {}
        self._deriv: Optional[_Problem] = None

    def deriv(self) -> "_Problem":
        if self._deriv is None:
            self._deriv = _Problem(derivative(self.terms), self.A, self.depth + 1)
        return self._deriv

    def _point(self, x: Fraction):
        hit = self.cache.get(x)
        if hit is not None:
            return hit
        A = self.A
        xi = A.const(x)
        lnx = A.log(xi)
        ln1px = A.log1p(xi)
        ratio = A.div(xi, A.add(xi, (mpfr(1), mpfr(1))))
        lnx_ = (lnx, ln1px, ratio)
        P = self.pos.evaluate(A, *lnx_) if self.pos.terms else None
        N = self.neg.evaluate(A, *lnx_) if self.neg.terms else None
        out = (lnx, P, N)
        self.cache[x] = out
        return out

    def negative_at(self, x: Fraction) -> bool:
        """Certified ``g(x) < 0``."""
        if x == 0:
            return self.g0 < 0
        if x == 1 and self.g1 is not None:
            return self.g1 < 0
        _, P, N = self._point(x)
        if N is None:
            return False
        if P is None:
            return True
        return P[0][1] < N[0][0]

    def _tangent_bound(self, s_t: Iv, P_t, s_e: Iv) -> mpfr:
        """Lower bound at ``s_e`` of the tangent to ``L`` at ``s_t``."""
        A = self.A
        ds = A.sub(s_e, s_t)
        return A.add(P_t[0], A.mul(P_t[1], ds))[0]

    def node_ok(self, a: Fraction, b: Fraction) -> bool:
        """Certified ``g >= 0`` on ``[a, b]``."""
        A = self.A
        if not self.neg.terms:
            return True
        if not self.pos.terms:
            return False
        if a == 0 and self.g0 == 0:
            return self.depth < 4 and self._boundary_ok(a, b, left=True)
        if b == 1 and self.g1 == 0:
            return self.depth < 4 and self._boundary_ok(a, b, left=False)
        if a == 0:
            p0 = self.pos.at_zero()
            if p0 <= 0:
                return False
            _, _, Nb = self._point(b)
            return A.log(A.const(p0))[0] >= Nb[0][1]
        sa, Pa, Na = self._point(a)
        sb, Pb, Nb = self._point(b)
        m = (a + b) / 2
        sm, Pm, _ = self._point(m)
        M_a, M_b = Na[0][1], Nb[0][1]
        for s_t, P_t in ((sm, Pm), (sa, Pa), (sb, Pb)):
            if (self._tangent_bound(s_t, P_t, sa) >= M_a
                    and self._tangent_bound(s_t, P_t, sb) >= M_b):
                return True
        return False

    def _boundary_ok(self, a: Fraction, b: Fraction, left: bool) -> bool:
        # g vanishes at the endpoint: g >= 0 on the node iff the signed derivative
        # is >= 0 there (g' >= 0 from the left end, -g' >= 0 from the right end)
        d = self.deriv()
        if left:
            return d.node_ok(a, b)
        neg = _Problem([(-c, bb, e) for c, bb, e in d.terms], self.A, d.depth)
        return neg.node_ok(a, b)

    def endpoint_verdict(self) -> Optional[Tuple[bool, Fraction]]:
        """Decide from exact endpoint data alone when possible."""
        if self.g0 < 0:
            return False, Fraction(0)
        if self.g1 is not None and self.g1 < 0:
            return False, Fraction(1)
        return None


def certify_nonnegative(terms: Sequence[Term], *, prec: int = DEFAULT_PREC,
                        max_nodes: int = 20000, min_width_bits: Optional[int] = None) -> PositivityResult:
    """Certify ``sum c x^e`` / ``(1+x)^e`` terms are ``>= 0`` on ``[0, 1]``."""
    A = Arith(prec)
    terms = normalize(terms)
    if terms and all(b == X for _, b, _ in terms):
        # x^e0 is positive on (0, 1]: divide it out so a high-order zero at 0 goes away
        e0 = min(e for _, _, e in terms)
        terms = [(c, b, e - e0) for c, b, e in terms]
    prob = _Problem(terms, A)
    if not prob.terms:
        return PositivityResult(True, 0, prec, reason="identically zero")
    ev = prob.endpoint_verdict()
    if ev is not None:
        return PositivityResult(False, 0, prec, witness=ev[1], reason="negative at an endpoint")
    if min_width_bits is None:
        min_width_bits = prec - 24
    floor_width = Fraction(1, 2**min_width_bits)
    heap = [(0, Fraction(0), Fraction(1))]
    nodes = 0
    while heap:
        _, a, b = heapq.heappop(heap)
        nodes += 1
        if nodes > max_nodes:
            return PositivityResult(None, nodes, prec, reason="node budget exhausted")
        if prob.node_ok(a, b):
            continue
        m = (a + b) / 2
        if prob.negative_at(m):
            return PositivityResult(False, nodes, prec, witness=m, reason="negative value")
        if b - a <= floor_width:
            return PositivityResult(None, nodes, prec, reason="interval width below working precision")
        # depth-first: a witness near a trouble spot turns up quickly
        heapq.heappush(heap, (-(nodes), a, m))
        heapq.heappush(heap, (-(nodes), m, b))
    return PositivityResult(True, nodes, prec)


def certify_with_escalation(terms: Sequence[Term], *, prec: int = DEFAULT_PREC, max_prec: int = 1024,
                            max_nodes: int = 20000) -> PositivityResult:
    while True:
        res = certify_nonnegative(terms, prec=prec, max_nodes=max_nodes)
        if res.status is not None or prec >= max_prec or res.reason == "node budget exhausted":
            return res
        prec *= 2


def is_nonnegative_exact_sample(terms: Sequence[Term], x: Fraction) -> Fraction:
    """Exact rational value of ``g(x)``; test helper for small exponents."""
    return sum((c * (x if b == X else 1 + x) ** e for c, b, e in normalize(terms)), Fraction(0))
