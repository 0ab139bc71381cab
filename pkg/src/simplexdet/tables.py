"""Reproduction harness for the eight result tables and the figure data.

Each table comes back as a :class:`TableArtifact`: a header, rows of plain
strings and ints, a diff against :mod:`reference`, and a truncation flag
when a cap or budget cut it short.  CSV output is byte-stable for fixed
caps: LF line endings, no timestamps in the body, intervals as ``a..b``.
"""

from __future__ import annotations

import io
import json
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Dict, List, Optional, Sequence, Tuple

from . import reference as ref
from .asymptotics import (onset_bands, properness_threshold, proper_length_count,
                          runs_of, ugly_ranges)
from .classifier import is_proper, weight_threshold
from .errors import BudgetExceeded, ParameterError
from .uepoly import bracket_root, evaluate, log2_fraction, pue_of, sign_changes, term_value
from .weights import weight_distribution


@dataclass
class TableArtifact:
    table_id: int
    header: List[str]
    rows: List[list]
    diffs: List[str] = field(default_factory=list)
    truncated: Optional[str] = None
    extra: dict = field(default_factory=dict)

    @property
    def matches(self) -> bool:
        return not self.diffs and self.truncated is None

    def to_csv(self) -> str:
        out = io.StringIO(newline="")
        out.write(",".join(self.header) + "\n")
        for row in self.rows:
            out.write(",".join(_cell(x) for x in row) + "\n")
        if self.truncated:
            out.write(f"# truncated: {self.truncated}\n")
        return out.getvalue()

    def to_json(self) -> str:
        body = {"table_id": self.table_id, "header": self.header,
                "rows": [[_json_cell(x) for x in r] for r in self.rows],
                "diffs": self.diffs, "truncated": self.truncated}
        return json.dumps(body, indent=1, sort_keys=True) + "\n"


def _cell(x) -> str:
    if isinstance(x, tuple):
        return f"{x[0]}..{x[1]}"
    if isinstance(x, (list,)):
        return " ".join(_cell(y) for y in x)
    if x is None:
        return ""
    return str(x)


def _json_cell(x):
    if isinstance(x, int) and not isinstance(x, bool) and abs(x) >= 2**53:
        return str(x)
    if isinstance(x, tuple):
        return [_json_cell(y) for y in x]
    if isinstance(x, list):
        return [_json_cell(y) for y in x]
    return x


def _per_k(art: TableArtifact, ks, body) -> TableArtifact:
    """Run ``body(k)`` for each ``k``; a budget overrun keeps the rows so far and marks the cut."""
    for k in ks:
        try:
            body(k)
        except BudgetExceeded as exc:
            art.truncated = f"stopped at k={k}: {exc}"
            break
    return art


def fmt_ranges(ranges: Sequence[Tuple[int, int]]) -> str:
    return " ".join(f"{a}..{b}" for a, b in ranges)


# --- the tables ----------------------------------------------------------------

def midpoint_distribution_table(k: int = 9, m: int = 1) -> TableArtifact:
    if not 1 <= m <= k - 3:
        raise ParameterError("the midpoint table needs 1 <= m <= k-3")
    n = (1 << k) - 3 * (1 << (k - m - 2))
    got = dict(weight_distribution(k, n).entries)
    got = {0: 1, **got}
    want = ref.midpoint_distribution(k, m)
    rows = [[w, c] for w, c in sorted(got.items())]
    diffs = [] if got == want else [f"distribution at n={n}: got {got}, expected {want}"]
    return TableArtifact(1, ["w", "A_w"], rows, diffs, extra={"k": k, "m": m, "n": n})


def onset_band_table(max_m: int = 356) -> TableArtifact:
    bands = onset_bands(max_m)
    rows = [[a, b, c, f"2m+{c}"] for a, b, c in bands]
    want = [(a, min(b, max_m), c) for a, b, c in ref.ONSET_BANDS if a <= max_m]
    diffs = [] if bands == want else [f"bands {bands} != {want}"]
    return TableArtifact(2, ["m_first", "m_last", "offset", "K"], rows, diffs)


def ugly_range_table(k_min: int = 9, k_max: int = 14) -> TableArtifact:
    art = TableArtifact(3, ["k", "m", "ranges"], [])

    def body(k):
        got = ugly_ranges(k)
        for m, runs in got.items():
            art.rows.append([k, m, fmt_ranges(runs)])
        want = ref.UGLY_RANGES.get(k)
        if want is not None and got != want:
            art.diffs.append(f"k={k}: got {got}, expected {want}")
    return _per_k(art, range(k_min, k_max + 1), body)


def threshold_rows(k: int = 17, ns: Optional[Sequence[int]] = None) -> List[Tuple[int, int, Fraction]]:
    """``(n, A_d, certified midpoint of 2^(k-n+n h(d/n)))``."""
    out = []
    for n in ns or [r[0] for r in ref.THRESHOLD_ROWS]:
        dist = weight_distribution(k, n)
        out.append((n, dist.a_d, weight_threshold(k, n, dist.d, prec=256).mid))
    return out


def threshold_table(tol: float = 0.05) -> TableArtifact:
    rows, diffs = [], []
    for (n, a_d, val), (_, want_a, want_v) in zip(threshold_rows(), ref.THRESHOLD_ROWS):
        rows.append([n, a_d, f"{float(val):.4f}"])
        if a_d != want_a:
            diffs.append(f"n={n}: A_d {a_d} != {want_a}")
        if abs(float(val) - want_v) > tol:
            diffs.append(f"n={n}: {float(val):.4f} differs from {want_v} by more than {tol}")
    return TableArtifact(4, ["n", "A_d", "level"], rows, diffs)


def proper_ranges(k: int, method: str = "sparse", lo: Optional[int] = None,
                  hi: Optional[int] = None) -> List[Tuple[int, int]]:
    """Maximal runs of proper lengths in ``[2^(k-1)+1, 2^(k-1)+2^(k-2)]`` (or ``[lo, hi]``)."""
    lo = (1 << (k - 1)) + 1 if lo is None else lo
    hi = (1 << (k - 1)) + (1 << (k - 2)) if hi is None else hi
    return runs_of([n for n in range(lo, hi + 1) if is_proper(k, n, method=method)])


def proper_range_table(k_min: int = 9, k_max: int = 12, method: str = "sparse") -> TableArtifact:
    art = TableArtifact(5, ["k", "ranges"], [])

    def body(k):
        got = proper_ranges(k, method)
        art.rows.append([k, fmt_ranges(got)])
        want = ref.PROPER_RANGES.get(k)
        if want is not None and got != want:
            art.diffs.append(f"k={k}: got {got}, expected {want}")
    return _per_k(art, range(k_min, k_max + 1), body)


def threshold_family_table(k_min: int = 6, k_max: int = 13, full_max: int = 12) -> TableArtifact:
    art = TableArtifact(6, ["k", "theta2", "theta1", "theta", "ceil_vartheta", "upper"], [])

    def body(k):
        rec = properness_threshold(k, full=k <= full_max)
        got = (rec.explicit_lower, rec.first_proper_midpoint, rec.threshold, rec.vartheta_ceiling)
        art.rows.append([k, *got, rec.upper_bound])
        want = ref.THRESHOLDS.get(k)
        if want is not None:
            for name, g, w in zip(("theta2", "theta1", "theta", "ceil_vartheta"), got, want):
                if g is not None and w is not None and g != w:
                    art.diffs.append(f"k={k}: {name} {g} != {w}")
        bad = [name for name, ok in rec.checks().items() if not ok]
        if bad:
            art.diffs.append(f"k={k}: failed checks {bad}")
    return _per_k(art, range(k_min, k_max + 1), body)


def non_proper_table(k_min: int = 9, k_max: int = 12) -> TableArtifact:
    art = TableArtifact(7, ["k", "t", "m", "ranges"], [])

    def body(k):
        rep = proper_length_count(k)
        for (t, m), runs in rep.sets.items():
            art.rows.append([k, t, m, fmt_ranges(runs)])
        want = ref.NON_PROPER.get(k)
        if want is not None and rep.sets != want:
            art.diffs.append(f"k={k}: got {rep.sets}, expected {want}")
    return _per_k(art, range(k_min, k_max + 1), body)


def proper_count_table(k_min: int = 6, k_max: int = 12) -> TableArtifact:
    art = TableArtifact(8, ["k", "count", "bound"], [])

    def body(k):
        rep = proper_length_count(k)
        art.rows.append([k, rep.count, rep.bound])
        want = ref.PROPER_COUNTS.get(k)
        if want is not None and (rep.count, rep.bound) != want:
            art.diffs.append(f"k={k}: got ({rep.count}, {rep.bound}), expected {want}")
        if rep.count < rep.bound:
            art.diffs.append(f"k={k}: count {rep.count} below the bound {rep.bound}")
    return _per_k(art, range(k_min, k_max + 1), body)


TABLES: Dict[int, Callable[..., TableArtifact]] = {
    1: midpoint_distribution_table,
    2: onset_band_table,
    3: ugly_range_table,
    4: threshold_table,
    5: proper_range_table,
    6: threshold_family_table,
    7: non_proper_table,
    8: proper_count_table,
}


def run_table(table_id: int, **caps) -> TableArtifact:
    """Build one table; a budget overrun yields a partial table marked as truncated."""
    if table_id not in TABLES:
        raise ParameterError(f"no table {table_id}; choose 1..8")
    try:
        return TABLES[table_id](**caps)
    except BudgetExceeded as exc:
        return TableArtifact(table_id, [], [], truncated=str(exc))


# --- figure data ---------------------------------------------------------------

@dataclass
class FigureData:
    csv: str
    crossing: Optional[Tuple[Fraction, Fraction]]
    switch: Optional[Tuple[Fraction, Fraction]]


def emit_fig1(samples: int = 200, precision: int = 6, k: int = 9, n: int = 320,
              tol: Fraction = Fraction(1, 10**4)) -> FigureData:
    """log2 of ``P_ue`` and of each term on a grid over ``(0, 1/2]``, with the level ``2^(k-n)``."""
    poly = pue_of(k, n)
    level = Fraction(2**k, 2**n)
    grid = [Fraction(i, 2 * samples) for i in range(1, samples + 1)]
    header = ["p", "log2_total"] + [f"log2_{c}p{w}" for c, w in poly.terms] + ["log2_level"]
    lines = [",".join(header)]
    for p in grid:
        vals = [evaluate(poly, p)] + [term_value(poly, i, p) for i in range(len(poly.terms))]
        cells = [f"{float(p):.{precision}f}"] + [f"{log2_fraction(v):.{precision}f}" for v in vals]
        cells.append(f"{k - n}")
        lines.append(",".join(cells))
    f = lambda p: evaluate(poly, p) - level
    ch = sign_changes(f, grid)
    crossing = bracket_root(f, *ch[0], tol) if ch else None
    g = lambda p: term_value(poly, 0, p) - term_value(poly, 1, p)
    ch = sign_changes(g, grid)
    switch = bracket_root(g, *ch[0], tol) if ch else None
    return FigureData("\n".join(lines) + "\n", crossing, switch)
