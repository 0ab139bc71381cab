"""Proper / good / satisfactory / ugly classification of ``S_{n,k}`` and its dual.

Two independent routes decide every property:

* the sparse route rewrites the property as nonnegativity of a short sum of
  ``x^e`` and ``(1+x)^e`` terms on ``[0, 1]`` with ``x = p/(1-p)`` (or
  ``x = 1-2p`` for the dual) and hands it to :mod:`positivity`;
* the dense route expands the same statement into an integer polynomial and
  decides it exactly with :mod:`rootiso`.

The sparse route is the default since it stays cheap for any length; the
dense one is the cross-check and the fallback.
"""

from __future__ import annotations

from dataclasses import asdict, dataclass
from fractions import Fraction
from math import comb, isqrt
from typing import Dict, List, Optional, Sequence, Tuple

import gmpy2
from gmpy2 import mpz

from . import positivity as pos
from . import rootiso
from .certified import Arith, CertifiedReal, evaluate as certified_eval
from .construction import build_generalized, decompose
from .errors import BudgetExceeded, InvariantViolation, ParameterError
from .positivity import ONE_PLUS_X, X
from .uepoly import UePolynomial, dual_distribution, pue_of
from .weights import first_row_weight, weight_distribution

DENSE_DEGREE_LIMIT = 1200

# decided_by labels, cheapest first
BOUNDARY_LENGTH = "boundary-length"
SUFFICIENT_INTERVAL = "sufficient-interval"
WHOLE_BAND = "whole-band"
MIN_WEIGHT = "min-weight-criterion"
WEIGHT_REFINEMENT = "weight-refinement"
LIFTING = "lifting"
ROOT_ISOLATION = "root-isolation"
ORACLE = "oracle"

DECIDED_BY = (BOUNDARY_LENGTH, SUFFICIENT_INTERVAL, WHOLE_BAND, MIN_WEIGHT,
              WEIGHT_REFINEMENT, LIFTING, ROOT_ISOLATION, ORACLE)


@dataclass(frozen=True)
class Verdict:
    k: int
    n: int
    dual: bool
    proper: Optional[bool]
    good: Optional[bool]
    satisfactory: Optional[bool]
    ugly_by_min_weight: bool
    ugly_witness_weight: Optional[int]
    decided_by: str

    def __post_init__(self):
        if self.decided_by not in DECIDED_BY:
            raise ParameterError(f"unknown decision route {self.decided_by!r}")
        check_implications(self)

    def as_json(self) -> dict:
        return asdict(self)


def check_implications(v: Verdict) -> None:
    """proper => good => satisfactory, and an ugliness witness rules all three out."""
    chain = [v.proper, v.good, v.satisfactory]
    for a, b in zip(chain, chain[1:]):
        if a is True and b is False:
            raise InvariantViolation(f"implication chain broken for {v}")
    if v.ugly_by_min_weight and v.satisfactory is not False:
        raise InvariantViolation(f"ugliness witness but satisfactory={v.satisfactory} for {v}")
    if v.ugly_witness_weight is not None and any(x is True for x in chain):
        raise InvariantViolation(f"ugliness witness contradicts {v}")


# --- sparse forms ---------------------------------------------------------------

def proper_terms(poly: UePolynomial) -> List[pos.Term]:
    """``sum A_w x^(w-d) (w - (n-w) x)``: same sign as ``dP/dp`` at ``p = x/(1+x)``."""
    d, n = poly.d, poly.n
    out = []
    for c, w in poly.terms:
        out.append((Fraction(c * w), X, w - d))
        out.append((Fraction(-c * (n - w)), X, w - d + 1))
    return out


def bounded_terms(poly: UePolynomial, level: Fraction) -> List[pos.Term]:
    """``level * (1+x)^n - sum A_w x^w``: nonnegative iff ``P <= level`` on ``[0, 1/2]``."""
    return [(Fraction(level), ONE_PLUS_X, poly.n)] + [(Fraction(-c), X, w) for c, w in poly.terms]


def satisfactory_terms(poly: UePolynomial) -> List[pos.Term]:
    return bounded_terms(poly, Fraction(2**poly.k, 2**poly.n))


def good_terms(poly: UePolynomial) -> List[pos.Term]:
    return bounded_terms(poly, Fraction(2**poly.k - 1, 2**poly.n))


def dual_proper_terms(poly: UePolynomial) -> List[pos.Term]:
    """``n 2^(k-n) (1+y)^(n-1) - sum A_w w y^(w-1)`` with ``y = 1-2p``.

    This is ``2^(k-1)`` times the derivative of the dual's error probability.
    """
    n, k = poly.n, poly.k
    return [(Fraction(n * 2**k, 2**n), ONE_PLUS_X, n - 1)] + [(Fraction(-c * w), X, w - 1) for c, w in poly.terms]


def dual_good_terms(poly: UePolynomial) -> List[pos.Term]:
    n, k = poly.n, poly.k
    lvl = Fraction(2**k, 2**n)
    return [(lvl, ONE_PLUS_X, n), (-lvl, X, 0)] + [(Fraction(-c), X, w) for c, w in poly.terms]


def dual_satisfactory_terms(poly: UePolynomial) -> List[pos.Term]:
    # in y = 1-2p the dual bound has the same shape as the primal one in x = p/(1-p)
    return satisfactory_terms(poly)


def _certify(terms, max_nodes: int = 20000, dense=None) -> bool:
    res = pos.certify_with_escalation(terms, max_nodes=max_nodes)
    if res.status is not None:
        return res.status
    if dense is not None:
        poly = dense()
        if len(poly) - 1 <= DENSE_DEGREE_LIMIT:
            return rootiso.nonnegative_on_01(poly)
    raise BudgetExceeded(f"sign certification undecided after {res.nodes} nodes ({res.reason})",
                         limit=max_nodes)


# --- dense forms ------------------------------------------------------------------

def proper_dense(poly: UePolynomial) -> rootiso.Poly:
    """Integer coefficients of the sparse proper form, expanded in ``x``."""
    d = poly.d
    g = [0] * (poly.max_weight - d + 2)
    for c, w in poly.terms:
        g[w - d] += c * w
        g[w - d + 1] -= c * (poly.n - w)
    return rootiso.trim(g)


def _two_minus_z_power(e: int) -> List[int]:
    return [comb(e, i) * 2 ** (e - i) * (-1) ** i for i in range(e + 1)]


def scaled_pue_dense(n: int, dist: Dict[int, int]) -> List[int]:
    """``2^n P(z/2)`` as an integer polynomial in ``z``; ``dist`` excludes weight 0."""
    out = [0] * (n + 1)
    for w, c in dist.items():
        if w == 0:
            continue
        for i, b in enumerate(_two_minus_z_power(n - w)):
            out[w + i] += c * b
    return out


def bounded_dense(n: int, dist: Dict[int, int], scaled_level: int) -> List[int]:
    """``scaled_level - 2^n P(z/2)``: nonnegative on ``[0,1]`` iff ``P <= scaled_level / 2^n``."""
    out = [-c for c in scaled_pue_dense(n, dist)]
    out[0] += scaled_level
    return rootiso.trim(out)


@dataclass(frozen=True)
class DerivativePolynomial:
    """``Q(p)`` with ``dP/dp = p^(d-1) (1-p)^(n-W-1) Q(p)``."""

    coeffs: Tuple[int, ...]
    d: int
    max_weight: int

    def __call__(self, p) -> Fraction:
        return rootiso.evaluate(list(self.coeffs), Fraction(p))


def derivative_polynomial(poly: UePolynomial) -> DerivativePolynomial:
    d, W, n = poly.d, poly.max_weight, poly.n
    out = [0] * (W - d + 2)
    for c, w in poly.terms:
        # A_w p^(w-d) (1-p)^(W-w) (w - n p)
        base = rootiso.one_minus_x_power(W - w)
        for i, b in enumerate(base):
            out[w - d + i] += c * w * b
            out[w - d + i + 1] -= c * n * b
    return DerivativePolynomial(tuple(rootiso.trim(out)), d, W)


# --- polynomial-level decisions -------------------------------------------------------

def poly_is_proper(poly: UePolynomial, method: str = "sparse") -> bool:
    if method == "dense":
        return rootiso.nonnegative_on_01(proper_dense(poly))
    return _certify(proper_terms(poly), dense=lambda: proper_dense(poly))


def poly_is_satisfactory(poly: UePolynomial, method: str = "sparse") -> bool:
    if method == "dense":
        return rootiso.nonnegative_on_01(bounded_dense(poly.n, poly.counts, 2**poly.k))
    return _certify(satisfactory_terms(poly), dense=lambda: bounded_dense(poly.n, poly.counts, 2**poly.k))


def poly_is_good(poly: UePolynomial, method: str = "sparse") -> bool:
    if method == "dense":
        return rootiso.nonnegative_on_01(bounded_dense(poly.n, poly.counts, 2**poly.k - 1))
    return _certify(good_terms(poly), dense=lambda: bounded_dense(poly.n, poly.counts, 2**poly.k - 1))


def _poly(k: int, n: int, skip_first_row: bool = False) -> UePolynomial:
    poly = pue_of(k, n)
    if skip_first_row:
        poly = poly.without(first_row_weight(k, n))
    return poly


def is_proper(k: int, n: int, skip_first_row: bool = False, method: str = "sparse") -> bool:
    """Is ``P_ue`` nondecreasing on ``[0, 1/2]``?

    With ``skip_first_row`` the codeword equal to the first generator row is
    left out; properness of that reduced sum carries over to every
    ``n + 2^(k-1) u``.
    """
    return poly_is_proper(_poly(k, n, skip_first_row), method)


def is_good(k: int, n: int, method: str = "sparse") -> bool:
    return poly_is_good(pue_of(k, n), method)


def is_satisfactory(k: int, n: int, dual: bool = False, method: str = "sparse") -> bool:
    if dual:
        return dual_is_satisfactory(k, n, method)
    return poly_is_satisfactory(pue_of(k, n), method)


# dual: the sparse route works from the primal distribution, the dense route
# from the dual distribution counted directly

def _dual_dense_dist(k: int, n: int) -> Dict[int, int]:
    dist = dual_distribution(build_generalized(k, n))
    dist.pop(0, None)
    return dist


def dual_is_proper(k: int, n: int, method: str = "sparse") -> bool:
    if method == "dense":
        s = scaled_pue_dense(n, _dual_dense_dist(k, n))
        return rootiso.nonnegative_on_01(rootiso.derivative(s))
    return _certify(dual_proper_terms(pue_of(k, n)))


def dual_is_good(k: int, n: int, method: str = "sparse") -> bool:
    if method == "dense":
        return rootiso.nonnegative_on_01(bounded_dense(n, _dual_dense_dist(k, n), 2 ** (n - k) - 1))
    return _certify(dual_good_terms(pue_of(k, n)))


def dual_is_satisfactory(k: int, n: int, method: str = "sparse") -> bool:
    if method == "dense":
        return rootiso.nonnegative_on_01(bounded_dense(n, _dual_dense_dist(k, n), 2 ** (n - k)))
    return _certify(dual_satisfactory_terms(pue_of(k, n)))


# --- ugliness from a single weight -----------------------------------------------

def _log_margin(A: Arith, k: int, n: int, w: int, count: int):
    # ln(count) + w ln w + (n-w) ln(n-w) - (k-n) ln 2 - n ln n
    def xlnx(v):
        return A.mul(A.const(v), A.log(A.const(v))) if v > 0 else (gmpy2.mpfr(0), gmpy2.mpfr(0))
    s = A.add(A.log(A.const(count)), xlnx(w))
    s = A.add(s, xlnx(n - w))
    s = A.sub(s, A.mul(A.const(k - n), A.ln2()))
    return A.sub(s, xlnx(n))


def _exact_exceeds(k: int, n: int, w: int, count: int) -> bool:
    lhs = mpz(count) * mpz(w) ** w * mpz(n - w) ** (n - w) * (mpz(2) ** (n - k))
    return lhs > mpz(n) ** n


def ugly_by_weight(k: int, n: int, w: int, count: Optional[int] = None) -> bool:
    """Does the weight-``w`` term alone push ``P_ue`` above ``2^(k-n)`` at ``p = w/n``?

    Only weights ``w <= n/2`` qualify, since ``p = w/n`` must lie in ``[0, 1/2]``.
    """
    if count is None:
        count = weight_distribution(k, n).entries.get(w)
        if count is None:
            raise ParameterError(f"no codewords of weight {w} in S_({n},{k})")
    if not 0 < 2 * w <= n:
        return False
    prec = 128
    while prec <= 1024:
        lo, hi = _log_margin(Arith(prec), k, n, w, count)
        if lo > 0:
            return True
        if hi < 0:
            return False
        prec *= 2
    return _exact_exceeds(k, n, w, count)


def ugly_by_min_weight(k: int, n: int) -> bool:
    dist = weight_distribution(k, n)
    return ugly_by_weight(k, n, dist.d, dist.a_d)


def ugliness_witness(k: int, n: int) -> Optional[int]:
    """Smallest weight whose term alone proves ugliness, if any."""
    for w, c in weight_distribution(k, n).entries.items():
        if ugly_by_weight(k, n, w, c):
            return w
    return None


def weight_threshold(k: int, n: int, w: int, prec: int = 128) -> CertifiedReal:
    """``2^(k-n+n h(w/n))``: the count a weight-``w`` term needs to make the code ugly."""
    def f(A):
        log2_val = A.div(A.neg(_log_margin(A, k, n, w, 1)), A.ln2())
        return A.exp2(log2_val)
    return certified_eval(f, prec)


# --- sufficient conditions -----------------------------------------------------------

def _floor_pow2(e: int) -> int:
    return 1 << e if e >= 0 else 0


def tau_floors(k: int, m: int, t: int) -> Tuple[int, int]:
    """``(floor of upper tau, floor of lower tau)`` for the band ``m`` of block ``t``."""
    if not (t >= 1 and 1 <= m <= k - 1):
        raise ParameterError(f"need t >= 1 and 1 <= m <= k-1, got k={k}, m={m}, t={t}")
    big = 1 << (k + 1)
    r_up = isqrt(1 + big * (t + 1) - (1 << (k - m + 2)))
    r_lo = isqrt(1 + big * (t + 1) - (1 << (k - m + 1)))
    cap = k - m - 2
    # floor((1+s)/2) = (1+floor(s))//2 and floor((s-1)/2) = (floor(s)-1)//2 for real s >= 0
    upper = min(_floor_pow2(cap), (1 + r_up) // 2)
    lower = min(_floor_pow2(cap) - 1 if cap >= 0 else -1, (r_lo - 1) // 2)
    return upper, lower


def sufficient_proper_interval(k: int, m: int, t: int) -> Tuple[Tuple[int, int], Tuple[int, int]]:
    """Two closed ranges of ``n`` on which ``S_{n,k}`` is proper (first-row-free sum too)."""
    up, lo = tau_floors(k, m, t)
    top = (1 << (k - 1)) * (t + 1)
    left = top - (1 << (k - m))
    right = top - (1 << (k - m - 1))
    return (left, left + up), (right - lo, right)


def whole_band_threshold(k: int, t: int = 1) -> int:
    """Least ``m >= 1`` with ``t 4^m >= 2^(k-3)``; every band from there on is proper."""
    m = 1
    while t * 4**m < 2 ** (k - 3):
        m += 1
    return m


def whole_band_start(k: int, t: int = 1) -> int:
    """First ``n`` of the proper tail ``[.., 2^(k-1)(t+1) - 1]`` of block ``t``."""
    return (1 << (k - 1)) * (t + 1) - (1 << (k - whole_band_threshold(k, t)))


def shortcut_proper(k: int, n: int) -> Optional[str]:
    """Route name if a sufficient condition certifies ``n`` proper, else None.

    Each of these also certifies the sum without the first-row codeword.
    """
    p = decompose(k, n)
    if p.t == 1 and p.m is not None and p.n_prime == (1 << k) - (1 << (k - p.m - 1)):
        return BOUNDARY_LENGTH
    if n >= whole_band_start(k, p.t):
        return WHOLE_BAND
    for m in range(1, k):
        (a, b), (c, d) = sufficient_proper_interval(k, m, p.t)
        if a <= n <= b or c <= n <= d:
            return SUFFICIENT_INTERVAL
    return None


# --- lifting ---------------------------------------------------------------------------

class LiftingIndex:
    """Lengths whose first-row-free sum is known to be nondecreasing.

    If it holds at ``n0`` then every ``n0 + 2^(k-1) u`` is proper.
    """

    def __init__(self):
        self._least: Dict[Tuple[int, int], int] = {}

    def add(self, k: int, n: int) -> None:
        key = (k, n % (1 << (k - 1)))
        if key not in self._least or n < self._least[key]:
            self._least[key] = n

    def covers(self, k: int, n: int) -> bool:
        n0 = self._least.get((k, n % (1 << (k - 1))))
        return n0 is not None and n0 <= n

    def __len__(self):
        return len(self._least)


# --- cascade -----------------------------------------------------------------------------

def classify(k: int, n: int, dual: bool = False, lifting: Optional[LiftingIndex] = None,
             max_nodes: int = 20000) -> Verdict:
    """Cheapest sufficient evidence first, exact sign certification last."""
    if k < 2:
        raise ParameterError("k must be at least 2")
    if n <= (1 << (k - 1)):
        raise ParameterError(f"n must exceed 2^(k-1) = {1 << (k - 1)}")
    if dual:
        return _classify_dual(k, n, max_nodes)
    route = shortcut_proper(k, n)
    if route is not None:
        return Verdict(k, n, False, True, True, True, False, None, route)
    if lifting is not None and lifting.covers(k, n):
        return Verdict(k, n, False, True, True, True, False, None, LIFTING)
    dist = weight_distribution(k, n)
    if ugly_by_weight(k, n, dist.d, dist.a_d):
        return Verdict(k, n, False, False, False, False, True, dist.d, MIN_WEIGHT)
    for w, c in dist.entries.items():
        if w != dist.d and ugly_by_weight(k, n, w, c):
            return Verdict(k, n, False, False, False, False, False, w, WEIGHT_REFINEMENT)
    poly = UePolynomial.from_distribution(dist)
    try:
        proper = _certify(proper_terms(poly), max_nodes, lambda: proper_dense(poly))
        if proper:
            return Verdict(k, n, False, True, True, True, False, None, ROOT_ISOLATION)
        good = _certify(good_terms(poly), max_nodes)
        sat = True if good else _certify(satisfactory_terms(poly), max_nodes)
    except BudgetExceeded:
        return Verdict(k, n, False, None, None, None, False, None, ROOT_ISOLATION)
    return Verdict(k, n, False, False, good, sat, False, None, ROOT_ISOLATION)


def decide_proper(k: int, n: int, max_nodes: int = 20000) -> Tuple[Optional[bool], str]:
    """Properness alone, with the route that settled it; skips good/satisfactory work."""
    route = shortcut_proper(k, n)
    if route is not None:
        return True, route
    poly = pue_of(k, n)
    try:
        return _certify(proper_terms(poly), max_nodes, lambda: proper_dense(poly)), ROOT_ISOLATION
    except BudgetExceeded:
        return None, ROOT_ISOLATION


def _classify_dual(k: int, n: int, max_nodes: int) -> Verdict:
    poly = pue_of(k, n)
    try:
        proper = _certify(dual_proper_terms(poly), max_nodes)
        good = True if proper else _certify(dual_good_terms(poly), max_nodes)
        sat = True if good else _certify(dual_satisfactory_terms(poly), max_nodes)
    except BudgetExceeded:
        return Verdict(k, n, True, None, None, None, False, None, ROOT_ISOLATION)
    return Verdict(k, n, True, proper, good, sat, False, None, ROOT_ISOLATION)


def classify_poly(poly: UePolynomial) -> Verdict:
    """Classification of an arbitrary weight distribution (no shortcuts apply)."""
    proper = poly_is_proper(poly)
    good = True if proper else poly_is_good(poly)
    sat = True if good else poly_is_satisfactory(poly)
    return Verdict(poly.k, poly.n, False, proper, good, sat, False, None, ROOT_ISOLATION)
