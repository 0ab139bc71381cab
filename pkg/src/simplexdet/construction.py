"""Generator matrices of the punctured simplex codes ``S_{n,k}``.

Columns are handled as ``k``-bit integers read big-endian: row 0 (the top
row) is the most significant bit.  With that convention the block
``H_k^{(m)}`` is simply the run of column values ``2^m, ..., 2^{m+1}-1`` and
``H_k`` is the concatenation of those runs for ``m = k-1, ..., 0``.
"""

from __future__ import annotations

import json
from collections import Counter
from dataclasses import dataclass
from typing import Iterable, Optional, Sequence

from .errors import ParameterError


@dataclass(frozen=True)
class BinaryMatrix:
    """Immutable ``rows x cols`` matrix over GF(2).

    Each row is packed into one Python int; bit ``j`` holds column ``j``.
    """

    rows: int
    cols: int
    bits: tuple

    def __post_init__(self):
        if self.rows < 1 or self.cols < 1:
            raise ParameterError(f"matrix must be at least 1x1, got {self.rows}x{self.cols}")
        if len(self.bits) != self.rows:
            raise ParameterError("row payload length does not match row count")
        mask = (1 << self.cols) - 1
        if any(r < 0 or r & ~mask for r in self.bits):
            raise ParameterError("row payload has bits outside the column range")

    @classmethod
    def from_columns(cls, height: int, columns: Sequence[int]) -> "BinaryMatrix":
        rows = [0] * height
        for j, col in enumerate(columns):
            if col >> height:
                raise ParameterError(f"column value {col} does not fit in {height} bits")
            for i in range(height):
                if (col >> (height - 1 - i)) & 1:
                    rows[i] |= 1 << j
        return cls(height, len(columns), tuple(rows))

    @classmethod
    def from_strings(cls, lines: Iterable[str]) -> "BinaryMatrix":
        lines = [ln.strip() for ln in lines if ln.strip()]
        width = len(lines[0])
        packed = []
        for ln in lines:
            if len(ln) != width or set(ln) - {"0", "1"}:
                raise ParameterError(f"bad matrix row {ln!r}")
            packed.append(sum(1 << j for j, ch in enumerate(ln) if ch == "1"))
        return cls(len(lines), width, tuple(packed))

    def _check(self, i: int, j: int) -> None:
        if not (0 <= i < self.rows and 0 <= j < self.cols):
            raise IndexError(f"entry ({i}, {j}) outside {self.rows}x{self.cols} matrix")

    def get(self, i: int, j: int) -> int:
        self._check(i, j)
        return (self.bits[i] >> j) & 1

    def row(self, i: int) -> int:
        self._check(i, 0)
        return self.bits[i]

    def column(self, j: int) -> int:
        """Column ``j`` as a big-endian integer (row 0 is the high bit)."""
        self._check(0, j)
        value = 0
        for r in self.bits:
            value = (value << 1) | ((r >> j) & 1)
        return value

    def columns(self) -> list:
        return [self.column(j) for j in range(self.cols)]

    def row_weights(self) -> tuple:
        return tuple(r.bit_count() for r in self.bits)

    def add_row(self, src: int, dst: int) -> "BinaryMatrix":
        """Return a new matrix with row ``src`` added (mod 2) to row ``dst``."""
        self._check(src, 0)
        self._check(dst, 0)
        new = list(self.bits)
        new[dst] ^= new[src]
        return BinaryMatrix(self.rows, self.cols, tuple(new))

    def hstack(self, other: "BinaryMatrix") -> "BinaryMatrix":
        if other.rows != self.rows:
            raise ParameterError("row counts differ")
        return BinaryMatrix(
            self.rows,
            self.cols + other.cols,
            tuple(a | (b << self.cols) for a, b in zip(self.bits, other.bits)),
        )

    def column_slice(self, start: int, stop: int) -> "BinaryMatrix":
        if not 0 <= start < stop <= self.cols:
            raise ParameterError(f"bad column slice [{start}, {stop})")
        mask = (1 << (stop - start)) - 1
        return BinaryMatrix(self.rows, stop - start, tuple((r >> start) & mask for r in self.bits))

    def row_strings(self) -> list:
        return ["".join("1" if (r >> j) & 1 else "0" for j in range(self.cols)) for r in self.bits]

    def to_txt(self) -> str:
        return "\n".join(self.row_strings()) + "\n"

    def to_json(self) -> str:
        return json.dumps({"rows": self.rows, "cols": self.cols, "matrix": self.row_strings()})

    def to_pbm(self) -> str:
        body = "\n".join(" ".join(s) for s in self.row_strings())
        return f"P1\n{self.cols} {self.rows}\n{body}\n"

    def __str__(self) -> str:
        return self.to_txt().rstrip("\n")


@dataclass(frozen=True)
class CodeParams:
    """Decomposition ``n = 2^{k-1}(t-1) + n'`` with ``n'`` in ``[2^{k-1}, 2^k - 1]``.

    ``m`` is the band index of the residual length:
    ``2^k - 2^{k-m} < n' <= 2^k - 2^{k-m-1}``.  It is ``None`` when
    ``n' = 2^{k-1}`` (the residual is a first-order Reed-Muller code).
    """

    k: int
    n: int
    t: int
    n_prime: int
    m: Optional[int]

    @property
    def shift(self) -> int:
        """Weight added to every codeword except the first row: ``2^{k-2}(t-1)``."""
        return (1 << self.k) * (self.t - 1) // 4


def band_index(k: int, n_prime: int) -> Optional[int]:
    half = 1 << (k - 1)
    if n_prime == half:
        return None
    if not half < n_prime < (1 << k):
        raise ParameterError(f"residual length {n_prime} outside [2^{k - 1}, 2^{k}-1]")
    # 2^k - n' lies in [2^{k-m-1}, 2^{k-m}), hence m = k - bit_length(2^k - n')
    return k - ((1 << k) - n_prime).bit_length()


def decompose(k: int, n: int) -> CodeParams:
    if k < 1:
        raise ParameterError(f"k must be >= 1, got {k}")
    half = 1 << (k - 1)
    if n < half:
        raise ParameterError(f"n={n} < 2^(k-1)={half}: not covered by this construction")
    t = n // half
    n_prime = n - half * (t - 1)
    return CodeParams(k, n, t, n_prime, band_index(k, n_prime))


def _block_columns(m: int) -> range:
    return range(1 << m, 1 << (m + 1))


def hk_columns(k: int, n: int) -> list:
    """Big-endian column values of the first ``n`` columns of ``H_k``."""
    if k < 1:
        raise ParameterError(f"k must be >= 1, got {k}")
    if not 1 <= n <= (1 << k) - 1:
        raise ParameterError(f"n={n} outside [1, 2^{k}-1]")
    cols = []
    for m in range(k - 1, -1, -1):
        cols.extend(_block_columns(m))
        if len(cols) >= n:
            break
    return cols[:n]


def build_block(k: int, m: int) -> BinaryMatrix:
    """The ``k x 2^m`` block ``H_k^{(m)}``."""
    if k < 1 or not 0 <= m <= k - 1:
        raise ParameterError(f"need k >= 1 and 0 <= m <= k-1, got k={k}, m={m}")
    return BinaryMatrix.from_columns(k, list(_block_columns(m)))


def build_hk_prefix(k: int, n: int) -> BinaryMatrix:
    """``H_k(n)``: the first ``n`` columns of ``H_k``."""
    return BinaryMatrix.from_columns(k, hk_columns(k, n))


def generalized_columns(k: int, n: int) -> list:
    p = decompose(k, n)
    return list(_block_columns(k - 1)) * (p.t - 1) + hk_columns(k, p.n_prime)


def build_generalized(k: int, n: int) -> BinaryMatrix:
    """``t-1`` copies of ``H_k^{(k-1)}`` followed by ``H_k(n')``; valid for any ``n >= 2^{k-1}``."""
    return BinaryMatrix.from_columns(k, generalized_columns(k, n))


def build_dkst(k: int, n: int) -> BinaryMatrix:
    """``M_{n,k}``: columns are ``2^k - 1, 2^k - 2, ..., 2^k - n`` in binary."""
    if k < 1 or not 1 <= n <= (1 << k) - 1:
        raise ParameterError(f"n={n} outside [1, 2^{k}-1]")
    top = (1 << k) - 1
    return BinaryMatrix.from_columns(k, [top - j for j in range(n)])


def equivalence_transform(k: int, n: int) -> BinaryMatrix:
    """Row-reduced generator of ``S_{n,k}`` whose columns should match ``M_{n,k}``.

    For ``n`` strictly inside a band the row with 1-based index ``m+1`` is added
    to every row below it; at ``n = 2^k - 2^{k-j}`` no operation is needed.
    """
    if k < 2 or not (1 << (k - 1)) < n <= (1 << k) - 1:
        raise ParameterError(f"need 2^(k-1) < n <= 2^k - 1, got k={k}, n={n}")
    h = build_hk_prefix(k, n)
    gap = (1 << k) - n
    if gap & (gap - 1) == 0:
        return h
    m = band_index(k, n)
    for dst in range(m + 1, k):
        h = h.add_row(m, dst)
    return h


def check_equivalence(k: int, n: int) -> bool:
    """True iff the transformed ``H_k(n)`` and ``M_{n,k}`` have equal column multisets."""
    lhs = Counter(equivalence_transform(k, n).columns())
    return lhs == Counter(build_dkst(k, n).columns())
