"""Undetected-error polynomials of ``S_{n,k}`` and of its dual on the BSC."""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Tuple

from .construction import BinaryMatrix, build_generalized
from .errors import ParameterError
from .weights import WeightDistribution, weight_distribution


@dataclass(frozen=True)
class UePolynomial:
    """``sum count * p^w * (1-p)^(n-w)`` over the nonzero weights."""

    n: int
    k: int
    terms: Tuple[Tuple[int, int], ...]  # (count, weight), weights increasing

    def __post_init__(self):
        ws = [w for _, w in self.terms]
        if ws != sorted(set(ws)) or any(c <= 0 for c, _ in self.terms):
            raise ParameterError("terms must have strictly increasing weights and positive counts")
        if ws and not (0 < ws[0] and ws[-1] <= self.n):
            raise ParameterError("weights outside [1, n]")

    @classmethod
    def from_distribution(cls, dist: WeightDistribution) -> "UePolynomial":
        return cls(dist.n, dist.k, tuple((c, w) for w, c in dist.entries.items()))

    @property
    def counts(self) -> Dict[int, int]:
        return {w: c for c, w in self.terms}

    @property
    def d(self) -> int:
        return self.terms[0][1]

    @property
    def max_weight(self) -> int:
        return self.terms[-1][1]

    def without(self, weight: int, count: int = 1) -> "UePolynomial":
        """Drop ``count`` codewords of the given weight (used for the first-row variant)."""
        out = []
        for c, w in self.terms:
            if w == weight:
                c -= count
                if c < 0:
                    raise ParameterError(f"no {count} codewords of weight {weight} to remove")
            if c:
                out.append((c, w))
        return UePolynomial(self.n, self.k, tuple(out))

    def __str__(self) -> str:
        return " + ".join(f"{c} p^{w}(1-p)^{self.n - w}" for c, w in self.terms)


@dataclass(frozen=True)
class DualUePolynomial:
    """Undetected-error polynomial of the ``[n, n-k]`` dual, kept in terms of the primal weights."""

    k: int
    n: int
    terms: Tuple[Tuple[int, int], ...]


def pue_of(k: int, n: int) -> UePolynomial:
    return UePolynomial.from_distribution(weight_distribution(k, n))


def dual_pue_of(k: int, n: int) -> DualUePolynomial:
    return DualUePolynomial(k, n, pue_of(k, n).terms)


def _unit(p) -> Fraction:
    p = Fraction(p)
    if not 0 <= p <= 1:
        raise ParameterError(f"p={p} outside [0, 1]")
    return p


def evaluate(poly: UePolynomial, p) -> Fraction:
    p = _unit(p)
    q = 1 - p
    return sum((c * p**w * q ** (poly.n - w) for c, w in poly.terms), Fraction(0))


def term_value(poly: UePolynomial, index: int, p) -> Fraction:
    p = _unit(p)
    c, w = poly.terms[index]
    return c * p**w * (1 - p) ** (poly.n - w)


def evaluate_dual_poly(dual: DualUePolynomial, p) -> Fraction:
    """``2^-k (1 + sum A_w (1-2p)^w) - (1-p)^n`` (the zero codeword included)."""
    p = _unit(p)
    if p > Fraction(1, 2):
        raise ParameterError("dual form is used on [0, 1/2]")
    y = 1 - 2 * p
    s = 1 + sum((c * y**w for c, w in dual.terms), Fraction(0))
    return s / 2**dual.k - (1 - p) ** dual.n


def evaluate_dual(k: int, n: int, p) -> Fraction:
    return evaluate_dual_poly(dual_pue_of(k, n), p)


# --- oracles ----------------------------------------------------------------

def dual_distribution(g: BinaryMatrix) -> Dict[int, int]:
    """Weight distribution of the code with parity-check matrix ``g``.

    Counts vectors ``c`` with ``g c = 0`` by weight with a syndrome
    dynamic program: state = (syndrome, weight), one column at a time.
    Includes the zero word.
    """
    if g.rows > 16:
        raise ParameterError("syndrome table would exceed 2^16 states")
    table = [[0] * (g.cols + 1) for _ in range(1 << g.rows)]
    table[0][0] = 1
    for col in g.columns():
        new = [row[:] for row in table]
        for s in range(1 << g.rows):
            src = table[s]
            dst = new[s ^ col]
            for w in range(g.cols):
                if src[w]:
                    dst[w + 1] += src[w]
        table = new
    return {w: c for w, c in enumerate(table[0]) if c}


def pue_from_distribution(n: int, dist: Dict[int, int], p) -> Fraction:
    """Direct sum over nonzero weights; ``dist`` may include weight 0."""
    p = _unit(p)
    return sum((c * p**w * (1 - p) ** (n - w) for w, c in dist.items() if w), Fraction(0))


def dual_pue_brute(k: int, n: int, p) -> Fraction:
    return pue_from_distribution(n, dual_distribution(build_generalized(k, n)), p)


# --- plot data ---------------------------------------------------------------

def log2_fraction(x: Fraction) -> float:
    """log2 of a positive rational to double precision, free of underflow."""
    if x <= 0:
        raise ParameterError("log2 of a non-positive value")
    return math.log2(x.numerator) - math.log2(x.denominator)


def sign_changes(f, grid: Sequence[Fraction]) -> List[Tuple[Fraction, Fraction]]:
    vals = [f(p) for p in grid]
    return [(grid[i], grid[i + 1]) for i in range(len(grid) - 1) if (vals[i] > 0) != (vals[i + 1] > 0)]


def bracket_root(f, lo: Fraction, hi: Fraction, tol: Fraction) -> Tuple[Fraction, Fraction]:
    """Bisect a sign change of ``f`` on ``[lo, hi]`` down to width ``tol``."""
    flo = f(lo) > 0
    while hi - lo > tol:
        mid = (lo + hi) / 2
        if (f(mid) > 0) == flo:
            lo = mid
        else:
            hi = mid
    return lo, hi


def crossings(poly: UePolynomial, level: Fraction, samples: int = 200,
              tol: Fraction = Fraction(1, 10**5)) -> List[Tuple[Fraction, Fraction]]:
    """Brackets of every ``p`` in ``(0, 1/2]`` where ``P_ue`` crosses ``level`` (grid resolution)."""
    grid = [Fraction(i, 2 * samples) for i in range(1, samples + 1)]
    f = lambda p: evaluate(poly, p) - level
    return [bracket_root(f, a, b, tol) for a, b in sign_changes(f, grid)]


def dominant_switch(poly: UePolynomial, i: int, j: int, samples: int = 200,
                    tol: Fraction = Fraction(1, 10**5)) -> Optional[Tuple[Fraction, Fraction]]:
    """Bracket of the first ``p`` where term ``j`` overtakes term ``i``."""
    grid = [Fraction(s, 2 * samples) for s in range(1, samples + 1)]
    f = lambda p: term_value(poly, i, p) - term_value(poly, j, p)
    ch = sign_changes(f, grid)
    return bracket_root(f, *ch[0], tol) if ch else None
