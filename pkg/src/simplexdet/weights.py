"""Weight distributions of ``S_{n,k}``: closed form and brute-force oracle."""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field
from typing import Dict, Optional

from .construction import BinaryMatrix, CodeParams, decompose
from .errors import BudgetExceeded, InvariantViolation, ParameterError

BRUTE_FORCE_MAX_ROWS = 24


@dataclass(frozen=True)
class AlphaVector:
    k: int
    n_prime: int
    m: int
    alpha: tuple  # alpha[0] is alpha_1

    def __getitem__(self, i: int) -> int:
        """1-based access, matching the usual alpha_i indexing."""
        return self.alpha[i - 1]


@dataclass(frozen=True)
class RowWeights:
    """Row weights of ``H_k(n)``.

    ``residual`` are the weights ``w_1..w_k`` of ``H_k(n')``; ``w`` are the
    weights of the rows of the full (possibly lengthened) matrix.
    """

    k: int
    n: int
    m: Optional[int]
    residual: tuple
    w: tuple

    def __getitem__(self, i: int) -> int:
        return self.residual[i - 1]


@dataclass(frozen=True)
class WeightDistribution:
    n: int
    k: int
    entries: Dict[int, int] = field(compare=True)

    def __post_init__(self):
        object.__setattr__(self, "entries", dict(sorted(self.entries.items())))

    @property
    def d(self) -> int:
        return next(iter(self.entries))

    @property
    def a_d(self) -> int:
        return self.entries[self.d]

    @property
    def max_weight(self) -> int:
        return next(reversed(self.entries))

    def total(self) -> int:
        return sum(self.entries.values())

    def weights(self) -> list:
        return list(self.entries)

    def as_json(self) -> dict:
        return {
            "k": self.k,
            "n": self.n,
            "d": self.d,
            "A": {str(w): _json_int(c) for w, c in self.entries.items()},
        }


def _json_int(x: int):
    return x if abs(x) < 2**53 else str(x)


def _band_params(k: int, n: int) -> CodeParams:
    p = decompose(k, n)
    if p.m is None:
        raise ParameterError(f"n'={p.n_prime} = 2^(k-1) has no band index")
    return p


def alpha_vector(k: int, n: int) -> AlphaVector:
    """Last column of ``H_k(n')`` from the band index and the position inside the band."""
    p = _band_params(k, n)
    m, n1 = p.m, p.n_prime
    offset = n1 - 1 - (1 << k) + (1 << (k - m))
    nbits = k - m - 1
    assert 0 <= offset < (1 << nbits) or nbits == 0 and offset == 0
    tail = tuple((offset >> (nbits - 1 - j)) & 1 for j in range(nbits))
    return AlphaVector(k, n1, m, (0,) * m + (1,) + tail)


def _row_weights_by_quotient(k: int, n: int, m: int, a: AlphaVector) -> list:
    w = [1 << (k - 1)] * m
    w.append(n - (1 << (k - 1)) + (1 << (k - m - 1)))
    for i in range(m + 2, k + 1):
        q = (n - 1) // (1 << (k - i + 1))
        if a[i] == 0:
            w.append((1 << (k - i)) * q)
        else:
            w.append(n - (1 << (k - i)) * q - (1 << (k - i)))
    return w


def _row_weights_by_alpha(k: int, m: int, a: AlphaVector) -> list:
    base = (1 << (k - 1)) - (1 << (k - m - 1))
    w = [1 << (k - 1)] * m
    w.append(base + 1 + sum(a[j] << (k - j) for j in range(m + 2, k + 1)))
    for i in range(m + 2, k + 1):
        head = sum(a[j] << (k - 1 - j) for j in range(m + 2, i))
        if a[i] == 0:
            w.append(base + head)
        else:
            w.append(base + 1 + head + sum(a[j] << (k - j) for j in range(i + 1, k + 1)))
    return w


def residual_row_weights(k: int, n: int) -> tuple:
    """Row weights of ``H_k(n')``, computed two independent ways that must agree."""
    p = decompose(k, n)
    if p.m is None:
        return ((1 << (k - 1)),) + ((1 << (k - 2)),) * (k - 1) if k > 1 else (1,)
    a = alpha_vector(k, n)
    w3 = _row_weights_by_quotient(k, p.n_prime, p.m, a)
    w5 = _row_weights_by_alpha(k, p.m, a)
    if w3 != w5:
        raise InvariantViolation(f"row weight formulas disagree at k={k}, n={n}: {w3} != {w5}")
    return tuple(w3)


def row_weights(k: int, n: int) -> RowWeights:
    p = decompose(k, n)
    res = residual_row_weights(k, n)
    full = (res[0] + (1 << (k - 1)) * (p.t - 1),) + tuple(x + p.shift for x in res[1:])
    return RowWeights(k, n, p.m, res, full)


def residual_distribution(k: int, n: int) -> Counter:
    """Weight multiset of ``H_k(n')`` with the first row's codeword listed first.

    Returns ``(first_row_weight, Counter of the other nonzero codewords)``.
    """
    p = decompose(k, n)
    half = 1 << (k - 1)
    if p.m is None:
        rest = Counter({half // 2: (1 << k) - 2}) if k > 1 else Counter()
        return half, rest
    m, n1 = p.m, p.n_prime
    w = residual_row_weights(k, n)
    rest = Counter()
    if m > 1:
        rest[w[0]] += (1 << m) - 2
    rest[w[m]] += 1 << m
    for i in range(m + 2, k + 1):
        rest[w[i - 1]] += 1 << (i - 2)
        rest[n1 - w[i - 1]] += 1 << (i - 2)
    return w[0], rest


def weight_distribution(k: int, n: int) -> WeightDistribution:
    """Closed-form distribution of ``S_{n,k}`` (nonzero codewords only)."""
    p = decompose(k, n)
    first, rest = residual_distribution(k, n)
    out = Counter({first + (1 << (k - 1)) * (p.t - 1): 1})
    for wt, c in rest.items():
        if c:
            out[wt + p.shift] += c
    return WeightDistribution(n, k, dict(out))


def first_row_weight(k: int, n: int) -> int:
    p = decompose(k, n)
    return (1 << (k - 1)) * p.t


def _closed_form_domain(p: CodeParams) -> bool:
    """Open band interior where the closed forms for d and A_d apply."""
    if p.m is None or p.m > p.k - 2:
        return False
    return p.n_prime < (1 << p.k) - (1 << (p.k - p.m - 1))


def min_distance(k: int, n: int) -> int:
    p = decompose(k, n)
    if not _closed_form_domain(p):
        return weight_distribution(k, n).d
    m, n1 = p.m, p.n_prime
    mid = (1 << k) - 3 * (1 << (k - m - 2))
    if n1 <= mid:
        d = (1 << (k - 1)) - (1 << (k - m - 1))
    else:
        d = n1 - (1 << (k - 1)) + (1 << (k - m - 2))
    return d + p.shift


def a_d(k: int, n: int) -> int:
    p = decompose(k, n)
    if not _closed_form_domain(p):
        return weight_distribution(k, n).a_d
    m = p.m
    w = residual_row_weights(k, n)
    i = m + 2
    while i < k and w[i] == w[m + 1]:
        i += 1
    return (1 << (i - 1)) - (1 << m)


def brute_force_distribution(g: BinaryMatrix) -> WeightDistribution:
    """Enumerate the whole row space of ``g`` (Gray-code order)."""
    if g.rows > BRUTE_FORCE_MAX_ROWS:
        raise BudgetExceeded(
            f"{g.rows} rows exceeds the enumeration limit of {BRUTE_FORCE_MAX_ROWS}",
            limit=BRUTE_FORCE_MAX_ROWS,
        )
    counts = Counter()
    word = 0
    for step in range(1, 1 << g.rows):
        word ^= g.bits[(step & -step).bit_length() - 1]
        counts[word.bit_count()] += 1
    zero = counts.pop(0, 0)
    if zero:
        # dependent rows: report nonzero codewords once each
        counts = Counter({w: c // (zero + 1) for w, c in counts.items()})
    return WeightDistribution(g.cols, g.rows, dict(counts))
