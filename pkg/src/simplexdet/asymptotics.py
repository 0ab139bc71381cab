"""Threshold quantities: where ugliness starts, where properness returns.

``G(k) = k - m - 2^(k-m-2) U_m`` is negative exactly when the minimum-weight
term makes ``S_{n,k}`` ugly at the band midpoint ``n(k,m)``; its real root
``kappa(m)`` gives the onset ``K(m) = ceil(kappa(m))``.  Everything here is
certified: reals are carried as directed-rounding intervals and every
integer answer is bracketed by sign checks on both sides.
"""

from __future__ import annotations

import functools
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, List, Optional, Tuple

from gmpy2 import mpfr

from .certified import Arith, CertifiedReal, certify, entropy_deficit_series
from .classifier import decide_proper, is_proper, tau_floors, ugly_by_min_weight
from .construction import decompose
from .errors import BudgetExceeded, InvariantViolation, ParameterError

ONE = (mpfr(1), mpfr(1))


def _iv(A: Arith, x) -> tuple:
    return A.const(x) if not isinstance(x, tuple) else x


def _decide(fn, prec=128, max_prec=4096):
    """Sign of an interval-valued function, escalating precision."""
    while True:
        lo, hi = fn(Arith(prec))
        if lo > 0:
            return 1
        if hi < 0:
            return -1
        if prec >= max_prec:
            raise BudgetExceeded(f"sign undecided at {prec} bits", limit=max_prec)
        prec *= 2


def _ceil(fn, prec=128, max_prec=4096) -> int:
    return certify(fn, decide=lambda v: v.ceil() is not None, prec=prec, max_prec=max_prec).ceil()


# --- U_m, u_m and G ---------------------------------------------------------------

def midpoint_length(k: int, m: int) -> int:
    """Midpoint ``2^k - 3 * 2^(k-m-2)`` of band ``m``."""
    if not 1 <= m <= k - 2:
        raise ParameterError(f"band midpoint needs 1 <= m <= k-2 (k={k}, m={m})")
    return (1 << k) - 3 * (1 << (k - m - 2))


def _band_denominator(m: int) -> int:
    return (1 << (m + 2)) - 3


def deficit_sum(m: int) -> Tuple[Fraction, Fraction]:
    """Exact enclosure of ``ln 2 * (1 - h(d/n))`` at the band midpoint (``1 - 2d/n = 1/N``)."""
    return entropy_deficit_series(Fraction(1, _band_denominator(m)))


def entropy_gap_scaled(A: Arith, m: int):
    """``U_m = N (1 - h((N-1)/(2N)))`` with ``N = 2^(m+2) - 3``."""
    lo, hi = deficit_sum(m)
    N = _band_denominator(m)
    s = (A.const(lo * N)[0], A.const(hi * N)[1])
    return A.div(s, A.ln2())


def correction_term(m: int) -> Tuple[Fraction, Fraction]:
    """``u_m = 2^(m+3) U_m ln 2 - 1``; the ``ln 2`` cancels, leaving an exact enclosure."""
    lo, hi = deficit_sum(m)
    N = _band_denominator(m)
    scale = (1 << (m + 3)) * N
    return scale * lo - 1, scale * hi - 1


def check_correction_sandwich(m: int, prec: int = 128) -> bool:
    """``3/N < u_m < 3/N + (2 ln 2 - 1) 2^(m+2) / N^3``, strictly."""
    N = _band_denominator(m)
    lo, hi = correction_term(m)
    if not Fraction(3, N) < lo:
        return False
    A = Arith(prec)
    two_ln2_minus_1 = A.sub(A.mul(A.const(2), A.ln2()), ONE)
    upper = A.add(A.const(Fraction(3, N)), A.mul(two_ln2_minus_1, A.const(Fraction(1 << (m + 2), N**3))))
    return A.const(hi)[1] < upper[0]


def onset_function(A: Arith, m: int, k) -> tuple:
    """``G(k) = k - m - 2^(k-m-2) U_m`` for a real (interval) ``k``."""
    k = _iv(A, k)
    e = A.sub(k, A.const(m + 2))
    return A.sub(A.sub(k, A.const(m)), A.mul(A.exp2(e), entropy_gap_scaled(A, m)))


def onset_sign(m: int, k) -> int:
    return _decide(lambda A: onset_function(A, m, k))


# --- K(m) ------------------------------------------------------------------------

LAMBDA_OFFSET = 5


def _omega(A: Arith, m: int):
    ln2 = A.ln2()
    lam = A.log2(ln2)
    mu = A.add(A.const(m + LAMBDA_OFFSET), lam)
    log2mu = A.log2(mu)
    rho = A.add(A.add(A.const(2 * m + 5), log2mu), lam)
    corr = A.div(log2mu, A.mul(mu, ln2))
    upper = A.add(rho, corr)
    gap = A.div(A.mul(log2mu, log2mu), A.mul(A.const(2), A.mul(A.mul(mu, mu), ln2)))
    return A.sub(upper, gap), upper


def omega_bounds(m: int, prec: int = 128) -> Tuple[CertifiedReal, CertifiedReal]:
    A = Arith(prec)
    lo, hi = _omega(A, m)
    return CertifiedReal.from_iv(lo, prec), CertifiedReal.from_iv(hi, prec)


@dataclass(frozen=True)
class OnsetRecord:
    """Everything computed for one band ``m``."""

    m: int
    entropy_gap: CertifiedReal         # U_m
    correction: CertifiedReal          # u_m
    root: CertifiedReal                # kappa(m)
    onset: int                         # K(m)
    omega_lower: Optional[CertifiedReal]
    omega_upper: Optional[CertifiedReal]

    def as_json(self) -> dict:
        def cr(x):
            return None if x is None else [float(x.lower), float(x.upper)]
        return {"m": self.m, "K": self.onset, "kappa": cr(self.root), "U": cr(self.entropy_gap),
                "u": cr(self.correction), "omega_lower": cr(self.omega_lower), "omega_upper": cr(self.omega_upper)}


def ugliness_onset(m: int) -> int:
    """``K(m)``: least ``k`` with ``G(k) < 0``, certified by the signs at ``K-1`` and ``K``."""
    if m < 1:
        raise ParameterError("m must be positive")
    if onset_sign(m, m + 1) <= 0:
        raise InvariantViolation(f"G(m+1) is not positive for m={m}")
    # float guess from the closed-form estimate, then walk to the sign change
    mu = m + LAMBDA_OFFSET + math.log2(math.log(2))
    k = max(m + 2, int(math.ceil(2 * m + 5 + math.log2(mu) + math.log2(math.log(2)))))
    while onset_sign(m, k) > 0:
        k += 1
    while k - 1 > m + 1 and onset_sign(m, k - 1) < 0:
        k -= 1
    # G is concave with G(m+1) > 0, so one sign change pins the root in (k-1, k)
    return k


def onset_root(m: int, K: Optional[int] = None, bits: int = 40) -> CertifiedReal:
    """Bracket of ``kappa(m)`` of width ``2^-bits``."""
    if K is None:
        K = ugliness_onset(m)
    lo, hi = Fraction(K - 1), Fraction(K)
    for _ in range(bits):
        mid = (lo + hi) / 2
        if onset_sign(m, mid) > 0:
            lo = mid
        else:
            hi = mid
    return CertifiedReal(lo, hi, bits)


def onset_record(m: int, prec: int = 256) -> OnsetRecord:
    K = ugliness_onset(m)
    root = onset_root(m, K)
    A = Arith(prec)
    U = CertifiedReal.from_iv(entropy_gap_scaled(A, m), prec)
    clo, chi = correction_term(m)
    w_lo = w_hi = None
    if m >= 2:
        w_lo, w_hi = omega_bounds(m, prec)
    return OnsetRecord(m, U, CertifiedReal(clo, chi, prec), root, K, w_lo, w_hi)


def omega_brackets_root(m: int, prec: int = 128) -> bool:
    """``omega_lower(m) < kappa(m) < omega_upper(m)`` via the signs of ``G`` at both bounds."""
    def at(which):
        return lambda A: onset_function(A, m, _omega(A, m)[which])
    return _decide(at(0), prec) > 0 and _decide(at(1), prec) < 0


def onset_table(max_m: int) -> List[Tuple[int, int]]:
    return [(m, ugliness_onset(m)) for m in range(1, max_m + 1)]


def onset_bands(max_m: int) -> List[Tuple[int, int, int]]:
    """Runs ``(m_first, m_last, c)`` over which ``K(m) = 2m + c``."""
    out: List[List[int]] = []
    for m, K in onset_table(max_m):
        c = K - 2 * m
        if out and out[-1][2] == c:
            out[-1][1] = m
        else:
            out.append([m, m, c])
    return [tuple(x) for x in out]


def integer_gap_scan(u_max: int = 64) -> List[Tuple[int, int]]:
    """Integers ``m`` strictly inside ``2^u/ln 2 - u - 5 -+ u^2/2^u`` for ``1 <= u <= u_max``.

    Only these ``m`` can have an integer between the two omega bounds; for
    each hit ``K(m) = ceil(omega_lower(m))`` is checked directly.
    """
    hits = []
    for u in range(1, u_max + 1):
        prec = 2 * u + 64

        def centre(A, u=u):
            return A.sub(A.div(A.const(1 << u), A.ln2()), A.const(u + 5))

        def lower(A, u=u):
            return A.sub(centre(A), A.const(Fraction(u * u, 1 << u)))

        def upper(A, u=u):
            return A.add(centre(A), A.const(Fraction(u * u, 1 << u)))
        lo = certify(lower, decide=lambda v: v.floor() is not None, prec=prec).floor()
        hi = certify(upper, decide=lambda v: v.ceil() is not None, prec=prec).ceil()
        for m in range(max(lo + 1, 1), hi):
            hits.append((u, m))
    return hits


def check_gap_hit(m: int) -> bool:
    lo, _ = omega_bounds(m, 256)
    c = lo.ceil()
    if c is None:
        raise BudgetExceeded(f"ceil(omega_lower({m})) undecided", limit=256)
    return ugliness_onset(m) == c


# --- ugly runs around the band midpoint ---------------------------------------------

@dataclass(frozen=True)
class UglyRun:
    k: int
    m: int
    midpoint: int
    first: int      # b1
    last: int       # b2
    offset_first: int   # beta1
    offset_last: int    # beta2
    gamma_first: CertifiedReal
    gamma_last: CertifiedReal

    def checks(self) -> Dict[str, bool]:
        g1, g2 = self.gamma_first.ceil(), self.gamma_last.ceil()
        return {
            "offset_first_bounded": g1 is not None and self.offset_first <= g1,
            "offset_last_bounded": g2 is not None and self.offset_last >= (1 << (self.k - self.m - 1)) - g2,
        }


def _gamma(k: int, m: int, sign: int, span: int, prec: int = 256) -> CertifiedReal:
    A = Arith(prec)
    a = A.mul(A.const(k - m), A.ln2())
    inner = A.add(A.mul(a, a), A.mul(A.const(2 * span), a))
    root = A.sqrt(inner)
    val = A.add(a, root) if sign > 0 else A.sub(root, a)
    return CertifiedReal.from_iv(val, prec)


def ugly_run(k: int, m: int) -> Optional[UglyRun]:
    """Maximal run of lengths around ``n(k,m)`` where the minimum-weight criterion fires."""
    n0 = midpoint_length(k, m)
    if not ugly_by_min_weight(k, n0):
        return None
    lo = n0
    while ugly_by_min_weight(k, lo - 1):
        lo -= 1
    hi = n0
    while ugly_by_min_weight(k, hi + 1):
        hi += 1
    base = (1 << k) - (1 << (k - m))
    g1 = _gamma(k, m, +1, (1 << k) - (1 << (k - m)))
    g2 = _gamma(k, m, -1, (1 << k) - (1 << (k - m - 1)))
    return UglyRun(k, m, n0, lo, hi, lo - base, hi - base, g1, g2)


def ugly_ranges(k: int) -> Dict[int, List[Tuple[int, int]]]:
    """Maximal ranges of ``n`` in ``[2^(k-1)+1, 2^k-1]`` where the criterion fires, by band."""
    out: Dict[int, List[List[int]]] = {}
    for n in range((1 << (k - 1)) + 1, 1 << k):
        if ugly_by_min_weight(k, n):
            m = decompose(k, n).m
            runs = out.setdefault(m, [])
            if runs and runs[-1][1] == n - 1:
                runs[-1][1] = n
            else:
                runs.append([n, n])
    return {m: [tuple(r) for r in runs] for m, runs in sorted(out.items())}


def criterion_survivors(k: int) -> int:
    """Lengths in ``[2^(k-1), 2^k-1]`` where the minimum-weight criterion does not fire."""
    return sum(1 for n in range(1 << (k - 1), 1 << k) if not ugly_by_min_weight(k, n))


def satisfactory_count_bound(k: int, prec: int = 128) -> CertifiedReal:
    """``k + 2^((k+5)/2) / 3 * sqrt(k^3 ln 2)``."""
    A = Arith(prec)
    val = A.add(A.const(k), A.div(A.mul(A.exp2(A.const(Fraction(k + 5, 2))),
                                         A.sqrt(A.mul(A.const(k**3), A.ln2()))), A.const(3)))
    return CertifiedReal.from_iv(val, prec)


# --- the properness threshold family ---------------------------------------------

def explicit_threshold_lower(k: int) -> int:
    """``ceil(2^(k-6) / ((k-1) ln 2) - 1/4)``."""
    return _ceil(lambda A: A.sub(A.div(A.const(Fraction(2**k, 64)), A.mul(A.const(k - 1), A.ln2())),
                                 A.const(Fraction(1, 4))))


def first_proper_midpoint(k: int, t_max: Optional[int] = None) -> int:
    """Least ``t`` with ``S_{n,k}`` proper at ``n = 2^(k-3)(4t+1)``."""
    if t_max is None:
        t_max = 1 << max(k - 5, 0)
    for t in range(1, t_max + 1):
        n = (1 << (k - 3)) * (4 * t + 1)
        proper, _ = decide_proper(k, n)
        if proper is None:
            raise BudgetExceeded(f"properness undecided at k={k}, n={n}", limit=0)
        if proper:
            return t
    raise BudgetExceeded(f"no proper midpoint length for t <= {t_max}", limit=t_max)


def _lik_log(A: Arith, R: int, t) -> Optional[tuple]:
    """Log of the left side of the ``ceil(vartheta)`` test; None where the square root is not real."""
    t = _iv(A, t)
    disc = A.sub(A.const((R - 1) ** 2), A.mul(A.const(8 * R), t))
    if disc[1] < 0:
        return None
    if disc[0] < 0:
        raise BudgetExceeded("discriminant sign undecided", limit=A.prec)
    delta = A.sqrt(disc)
    four_t1 = A.add(A.mul(A.const(4), t), ONE)
    num = A.mul(A.mul(A.const(2 * (4 * R - 2)), four_t1), A.add(A.const(R), delta))
    den = A.sub(A.add(A.mul(A.const(4 * R), t), A.const(R - 1)), A.mul(four_t1, delta))
    eight = A.mul(A.const(8 * R), t)
    ratio_num = A.sub(A.add(eight, A.const(R - 1)), delta)
    ratio_den = A.add(A.add(eight, A.const(3 * R - 1)), delta)
    val = A.sub(A.log(num), A.log(den))
    return A.add(val, A.mul(A.const(R), A.sub(A.log(ratio_num), A.log(ratio_den))))


def _lik_sign(R: int, t) -> Optional[int]:
    """Sign of log(lhs); None in the non-real regime."""
    prec = 128
    while True:
        A = Arith(prec)
        v = _lik_log(A, R, t)
        if v is None:
            return None
        if v[0] >= 0:
            return 1
        if v[1] < 0:
            return -1
        if prec >= 4096:
            raise BudgetExceeded("likelihood sign undecided", limit=prec)
        prec *= 2


def vartheta_ceiling(k: int) -> Tuple[int, bool]:
    """Least integer ``t`` passing the test, and whether it lay in the non-real regime."""
    R = 1 << (k - 4)
    t = 1
    while True:
        s = _lik_sign(R, t)
        if s is None:
            return t, True
        if s > 0:
            # every smaller t was checked and failed on the way here
            return t, False
        t += 1


def vartheta(k: int, bits: int = 60) -> CertifiedReal:
    """The real root ``vartheta(k)``, bracketed by bisection on the log of the test's left side."""
    R = 1 << (k - 4)
    T, nonreal = vartheta_ceiling(k)
    t_real_max = Fraction((R - 1) ** 2, 8 * R)
    lo = Fraction(T - 1)
    hi = min(Fraction(T), t_real_max)
    if lo == 0:
        lo = hi / 2**20
        while _lik_sign(R, lo) != -1:
            lo /= 2
    if _lik_sign(R, hi) != 1 or _lik_sign(R, lo) != -1:
        raise InvariantViolation(f"vartheta not bracketed for k={k}")
    for _ in range(bits):
        mid = (lo + hi) / 2
        if _lik_sign(R, mid) > 0:
            hi = mid
        else:
            lo = mid
    return CertifiedReal(lo, hi, bits)


def vartheta_upper_bound(k: int, prec: int = 128) -> CertifiedReal:
    """``2^(k-5) / ((k-2) ln 2 + ln(k-3) - 1/(2^(k-3)-1)) + 1/2``."""
    A = Arith(prec)
    den = A.add(A.mul(A.const(k - 2), A.ln2()), A.log(A.const(k - 3)))
    den = A.sub(den, A.const(Fraction(1, 2 ** (k - 3) - 1)))
    val = A.add(A.div(A.const(2 ** (k - 5)), den), A.const(Fraction(1, 2)))
    return CertifiedReal.from_iv(val, prec)


def vartheta_gap(k: int, theta: CertifiedReal) -> CertifiedReal:
    """``vartheta - (k-2)/(k-3) (4 vartheta + 1) 4^-k`` as an enclosure."""
    c = Fraction(k - 2, k - 3) / 4**k
    lo = theta.lower - c * (4 * theta.lower + 1)
    hi = theta.upper - c * (4 * theta.upper + 1)
    return CertifiedReal(lo, hi, theta.precision)


@dataclass
class ThresholdRecord:
    k: int
    explicit_lower: int                # theta2
    first_proper_midpoint: int         # theta1
    vartheta_ceiling: int
    nonreal_at_ceiling: bool
    vartheta: CertifiedReal
    vartheta_upper: CertifiedReal
    threshold: Optional[int] = None    # theta, when the full scan ran
    upper_bound: int = 0               # 2^(k-5)

    def checks(self) -> Dict[str, bool]:
        gap = vartheta_gap(self.k, self.vartheta)
        out = {
            "explicit_le_first": self.explicit_lower <= self.first_proper_midpoint,
            "first_le_ceiling": self.first_proper_midpoint <= self.vartheta_ceiling,
            "vartheta_below_upper": self.vartheta.upper < self.vartheta_upper.lower,
            "first_above_gap": self.first_proper_midpoint > gap.upper,
        }
        if self.threshold is not None:
            out["first_le_threshold"] = self.first_proper_midpoint <= self.threshold <= self.upper_bound
        return out

    def as_json(self) -> dict:
        return {"k": self.k, "theta2": self.explicit_lower, "theta1": self.first_proper_midpoint,
                "theta": self.threshold, "ceil_vartheta": self.vartheta_ceiling,
                "vartheta": [float(self.vartheta.lower), float(self.vartheta.upper)],
                "upper_bound": self.upper_bound}


def properness_threshold(k: int, full: bool = False) -> ThresholdRecord:
    if k < 6:
        raise ParameterError("the threshold family is defined for k >= 6")
    T, nonreal = vartheta_ceiling(k)
    rec = ThresholdRecord(k, explicit_threshold_lower(k), first_proper_midpoint(k), T, nonreal,
                          vartheta(k), vartheta_upper_bound(k), upper_bound=1 << (k - 5))
    if full:
        rec.threshold = proper_length_count(k).threshold
    return rec


# --- counting proper lengths -------------------------------------------------------

def band_of(k: int, n: int) -> Tuple[int, int]:
    """``(t, m)`` with ``n`` in the closed band ``[2^(k-1)(t+1) - 2^(k-m), 2^(k-1)(t+1) - 2^(k-m-1)]``."""
    p = decompose(k, n)
    if p.m is None:
        raise ParameterError(f"n={n} is a multiple of 2^(k-1) and lies in no band")
    return p.t, p.m


def runs_of(values: List[int]) -> List[Tuple[int, int]]:
    out: List[List[int]] = []
    for v in sorted(values):
        if out and out[-1][1] == v - 1:
            out[-1][1] = v
        else:
            out.append([v, v])
    return [tuple(r) for r in out]


@dataclass
class ProperScan:
    k: int
    limit: int                          # lengths n < limit were examined
    non_proper: List[int]
    closed: bool                        # every residue class reached a lifting point
    lift_points: Dict[int, int] = field(default_factory=dict)
    routes: Dict[str, int] = field(default_factory=dict)

    @property
    def threshold(self) -> Optional[int]:
        """``theta(k)``: least ``T`` with every ``n >= 2^(k-1) T`` proper."""
        if not self.closed:
            return None
        if not self.non_proper:
            return 1
        return max(self.non_proper) // (1 << (self.k - 1)) + 1

    @property
    def count(self) -> int:
        """Proper lengths in ``[2^(k-1)+1, limit-1]``."""
        return (self.limit - (1 << (self.k - 1)) - 1) - sum(1 for n in self.non_proper if n < self.limit)

    def non_proper_sets(self) -> Dict[Tuple[int, int], List[Tuple[int, int]]]:
        """Maximal intervals of non-proper lengths grouped by ``(t, m)``."""
        groups: Dict[Tuple[int, int], List[int]] = {}
        for n in self.non_proper:
            groups.setdefault(band_of(self.k, n), []).append(n)
        return {key: runs_of(v) for key, v in sorted(groups.items())}

    def band_counts(self) -> Dict[Tuple[int, int], int]:
        """Proper lengths in each half-open band ``(left, right]``, ``t < 2^(k-5)``."""
        k = self.k
        bad: Dict[Tuple[int, int], int] = {}
        for n in self.non_proper:
            t, m = band_of(k, n)
            left = (1 << (k - 1)) * (t + 1) - (1 << (k - m))
            if n > left:
                bad[(t, m)] = bad.get((t, m), 0) + 1
        out = {}
        for t in range(1, (1 << (k - 5))):
            for m in range(1, k):
                out[(t, m)] = (1 << (k - m - 1)) - bad.get((t, m), 0)
        return out


def scan_proper(k: int, limit: int = 0, max_t: Optional[int] = None) -> ProperScan:
    """Classify every length ``n > 2^(k-1)`` residue class by residue class.

    A class stops at the first ``n`` whose sum without the first-row codeword
    is certified nondecreasing; all later lengths of that class are proper.
    Classes still open after ``max_t`` blocks leave the scan unclosed.
    ``limit`` only sets the range reported by ``count``.
    """
    half = 1 << (k - 1)
    if max_t is None:
        max_t = max(4, 1 << max(k - 5, 0)) + 1
    non_proper: List[int] = []
    lift: Dict[int, int] = {}
    routes: Dict[str, int] = {}
    for r in range(half):
        n = half + r if r else 2 * half
        while n < half * (max_t + 1):
            proper, route = decide_proper(k, n)
            routes[route] = routes.get(route, 0) + 1
            if proper is None:
                raise BudgetExceeded(f"properness undecided at k={k}, n={n}", limit=0)
            if not proper:
                non_proper.append(n)
            elif is_proper(k, n, skip_first_row=True):
                lift[r] = n
                break
            n += half
    non_proper.sort()
    return ProperScan(k, limit, non_proper, len(lift) == half, lift, routes)


@dataclass
class ProperCountReport:
    k: int
    count: int            # Phi_k
    bound: int
    threshold: Optional[int]
    sets: Dict[Tuple[int, int], List[Tuple[int, int]]]
    band_counts: Dict[Tuple[int, int], int]
    midpoint_in_every_set: bool

    def as_json(self) -> dict:
        return {"k": self.k, "phi": self.count, "bound": self.bound, "theta": self.threshold,
                "X": [{"t": t, "m": m, "ranges": [list(r) for r in rs]} for (t, m), rs in self.sets.items()]}


def proper_count_bound(k: int) -> int:
    """``ceil(17/21 * 2^(2k-6) - 55/3 * 2^(k-5))``, exact."""
    v = Fraction(17, 21) * 2 ** (2 * k - 6) - Fraction(55, 3) * Fraction(2**k, 32)
    return math.ceil(v)


@functools.lru_cache(maxsize=None)
def proper_length_count(k: int) -> ProperCountReport:
    if k < 6:
        raise ParameterError("the count is defined for k >= 6")
    limit = 1 << (2 * k - 6)
    scan = scan_proper(k, limit=limit)
    sets = scan.non_proper_sets()
    mid_ok = all(
        any(a <= (1 << (k - 1)) * (t - 1) + midpoint_length(k, 1) <= b for a, b in runs)
        for (t, m), runs in sets.items() if m == 1)
    return ProperCountReport(k, scan.count, proper_count_bound(k), scan.threshold, sets,
                             scan.band_counts(), mid_ok)


def band_count_checks(k: int, band_counts: Dict[Tuple[int, int], int]) -> Dict[str, bool]:
    """Per-band lower bounds: ``> 2^((k+1)/2) sqrt(t) - 1`` in the first regime, all proper otherwise."""
    h = (k - 3) // 2
    ok_a = ok_bc = True
    for (t, m), c in band_counts.items():
        if m <= h and t <= 2 ** (k - 2 * m - 3) - 1:
            # c > 2^((k+1)/2) sqrt(t) - 1  <=>  (c+1)^2 > 2^(k+1) t
            ok_a &= c + 1 > 0 and (c + 1) ** 2 > 2 ** (k + 1) * t
        else:
            ok_bc &= c == 2 ** (k - m - 1)
    return {"regime_a": ok_a, "regime_bc": ok_bc}


def closed_sums(k: int) -> Dict[str, Tuple[Fraction, Fraction]]:
    """(direct sum, closed form) pairs for the all-proper regimes and for the band count."""
    h = (k - 3) // 2
    direct_c = sum(Fraction(2 ** (k - m - 1)) * (2 ** (k - 5) - 1) for m in range(h + 1, k))
    closed_c = Fraction(2 ** (2 * k - 6 - h) - 2 ** (k - 5) - 2 ** (k - 1 - h) + 1)
    direct_b = sum(Fraction(2 ** (k - m - 1)) * (2 ** (k - 5) - 2 ** (k - 2 * m - 3)) for m in range(1, h + 1))
    closed_b = Fraction(3, 7) * 2 ** (2 * k - 6) - 2 ** (2 * k - 6 - h) + Fraction(2 ** (2 * k - 4 - 3 * h), 7)
    direct_n = sum(Fraction(2 ** (k - 2 * m - 3) - 1) for m in range(1, h + 1))
    closed_n = Fraction(2 ** (k - 3) - 2 ** (k - 3 - 2 * h), 3) - h
    return {"regime_c": (direct_c, closed_c), "regime_b": (direct_b, closed_b), "regime_a_terms": (direct_n, closed_n)}


def tau_regime_consistent(k: int) -> bool:
    """Where the per-band count is claimed complete, the two tau floors cover the whole band."""
    h = (k - 3) // 2
    for m in range(1, k):
        for t in range(1, 2 ** (k - 5)):
            if m > h or t >= 2 ** (k - 2 * m - 3):
                up, lo = tau_floors(k, m, t)
                if m <= k - 2 and (up, lo) != (2 ** (k - m - 2), 2 ** (k - m - 2) - 1):
                    return False
    return True
