"""Acceptance criteria 1-11, one test each.

Every test prints a ``criterion N: PASS|FAIL`` line (visible even without
``-s``) and then asserts, so a red criterion shows up in both places.
Run just these with ``pytest tests/test_acceptance.py``.
"""

import random
from fractions import Fraction

import pytest

from simplexdet import asymptotics as asy
from simplexdet import classifier as cl
from simplexdet import tables
from simplexdet.cache import VerdictCache
from simplexdet.certified import check_entropy_sandwich
from simplexdet.construction import build_generalized, decompose
from simplexdet.reference import PROPER_RANGES, THRESHOLD_ROWS, THRESHOLDS
from simplexdet.uepoly import dual_pue_brute, evaluate_dual
from simplexdet.weights import brute_force_distribution, residual_row_weights, weight_distribution


@pytest.fixture
def report(capsys):
    def emit(number, ok, detail=""):
        with capsys.disabled():
            print(f"\ncriterion {number}: {'PASS' if ok else 'FAIL'}" + (f" ({detail})" if detail else ""))
        assert ok, detail
    return emit


def test_criterion_01_closed_form_equals_enumeration(report):
    bad = []
    cases = 0
    for k in range(2, 9):
        for n in range(2 ** (k - 1) + 1, 2**k):
            cases += 1
            if weight_distribution(k, n) != brute_force_distribution(build_generalized(k, n)):
                bad.append((k, n))
    for k in range(2, 7):
        for n in range(2 ** (k - 1) + 1, 2 ** (k - 1) * 5):
            if decompose(k, n).t <= 4:
                cases += 1
                if weight_distribution(k, n) != brute_force_distribution(build_generalized(k, n)):
                    bad.append((k, n))
    report(1, not bad, f"{cases} lengths, mismatches {bad[:5]}")


def test_criterion_02_s320_distribution(report):
    got = weight_distribution(9, 320).entries
    report(2, got == {128: 2, 160: 504, 192: 4, 256: 1}, f"got {got}")


def test_criterion_03_onset_bands(report):
    art = tables.run_table(2, max_m=356)
    report(3, art.matches, f"{len(art.rows)} bands; diffs {art.diffs}")


def test_criterion_04_ugly_ranges(report):
    art = tables.run_table(3, k_min=9, k_max=14)
    report(4, art.matches, f"{len(art.rows)} rows; diffs {art.diffs}")


def test_criterion_05_threshold_rows(report):
    rows = tables.threshold_rows()
    bad = []
    for (n, a_d, val), (_, want_a, want_v) in zip(rows, THRESHOLD_ROWS):
        if a_d != want_a:
            bad.append(f"n={n}: A_d {a_d} != {want_a}")
        if abs(float(val) - want_v) > 0.05:
            bad.append(f"n={n}: level {float(val):.4f} vs printed {want_v}")
    report(5, not bad, "; ".join(bad) or "A_d exact, levels within 0.05")


def test_criterion_06_proper_ranges(report):
    bad = []
    for k in range(9, 13):
        got = tables.proper_ranges(k, "sparse")
        if got != PROPER_RANGES[k]:
            bad.append(f"k={k} sparse {got}")
    # the dense integer route independently, in full for k <= 11
    for k in range(9, 12):
        got = tables.proper_ranges(k, "dense")
        if got != PROPER_RANGES[k]:
            bad.append(f"k={k} dense {got}")
    # and at k = 12 around every range boundary
    for a, b in PROPER_RANGES[12]:
        for n in list(range(a - 3, a + 4)) + list(range(b - 3, b + 4)):
            if 2049 <= n <= 3072:
                want = any(x <= n <= y for x, y in PROPER_RANGES[12])
                if cl.is_proper(12, n, method="dense") != want:
                    bad.append(f"k=12 dense n={n}")
    report(6, not bad, "; ".join(bad) or "k=9..12 sparse, k=9..11 dense, k=12 dense at the boundaries")


@pytest.mark.slow
def test_criterion_06_dense_route_k12(report):
    # the full k = 12 band on integer root isolation alone: several minutes
    got = tables.proper_ranges(12, "dense")
    report(6, got == PROPER_RANGES[12], f"k=12 dense {got}")


def test_criterion_07_threshold_family(report):
    bad = []
    for k in range(6, 21):
        rec = asy.properness_threshold(k)
        want = THRESHOLDS[k]
        got = (rec.explicit_lower, rec.first_proper_midpoint, rec.vartheta_ceiling)
        if got != (want[0], want[1], want[3]):
            bad.append(f"k={k}: {got} != {(want[0], want[1], want[3])}")
        failed = [name for name, ok in rec.checks().items() if not ok]
        if failed:
            bad.append(f"k={k}: {failed}")
    for k in range(6, 13):
        theta = asy.proper_length_count(k).threshold
        if theta != THRESHOLDS[k][2]:
            bad.append(f"k={k}: theta {theta} != {THRESHOLDS[k][2]}")
    report(7, not bad, "; ".join(bad) or "theta2/theta1/ceil(vartheta) for k=6..20, theta for k=6..12")


def test_criterion_08_non_proper_sets(report):
    art = tables.run_table(7, k_min=9, k_max=12)
    report(8, art.matches, f"{len(art.rows)} rows; diffs {art.diffs}")


def test_criterion_09_proper_counts(report):
    art = tables.run_table(8, k_min=6, k_max=12)
    bound_ok = all(count >= bound for _, count, bound in art.rows)
    checks = {k: asy.band_count_checks(k, asy.proper_length_count(k).band_counts) for k in range(6, 13)}
    checks_ok = all(all(c.values()) for c in checks.values())
    detail = f"bound holds: {bound_ok}; per-band bounds: {checks_ok}; diffs {art.diffs}"
    report(9, art.matches and bound_ok and checks_ok, detail)


def test_criterion_10_small_k_all_proper(report):
    bad = []
    for k in range(2, 9):
        scan = asy.scan_proper(k)
        if not scan.closed or scan.non_proper:
            bad.append(f"k={k}: closed={scan.closed}, non-proper {scan.non_proper[:5]}")
            continue
        half = 2 ** (k - 1)
        # re-derive every verdict the scan used on the dense route
        for r, n0 in scan.lift_points.items():
            if not cl.is_proper(k, n0, skip_first_row=True, method="dense"):
                bad.append(f"k={k}: lifting base {n0} not confirmed")
            for n in range(half + r if r else 2 * half, n0 + 1, half):
                if not cl.is_proper(k, n, method="dense"):
                    bad.append(f"k={k}: n={n} not proper")
    report(10, not bad, "; ".join(bad) or "k=2..8, every residue class closed by lifting")


def test_criterion_11_property_suites(report, tmp_path):
    rng = random.Random(20)
    results = {}

    # two row-weight formulas agree (residual_row_weights raises otherwise)
    for k in range(2, 17):
        for n in range(2 ** (k - 1) + 1, 2**k):
            residual_row_weights(k, n)
    for k in range(17, 21):
        for m in range(1, k):
            lo = 2**k - 2 ** (k - m)
            hi = 2**k - 2 ** (k - m - 1)
            for n in [lo, lo + 1, hi - 1, hi] + [rng.randint(lo, hi) for _ in range(64)]:
                if 2 ** (k - 1) < n < 2**k:
                    residual_row_weights(k, n)
    results["row weight formulas"] = True

    ordering = True
    for k in range(4, 13):
        for n in range(2 ** (k - 1) + 1, 2**k):
            m = decompose(k, n).m
            w = residual_row_weights(k, n)
            ordering &= len(set(w[:m])) == 1 and 2 * w[m] > n
            if m <= k - 2:
                ordering &= w[0] >= w[m] > w[k - 1] and list(w[m + 1:]) == sorted(w[m + 1:])
    results["row weight ordering"] = ordering

    xs = [Fraction(rng.randint(1, 10**6 - 1), 2 * 10**6) for _ in range(1000)]
    results["entropy sandwich"] = all(check_entropy_sandwich(x) for x in xs)

    results["correction sandwich"] = all(asy.check_correction_sandwich(m) for m in range(1, 101))

    dual_ok = True
    for k in range(2, 7):
        for n in range(2 ** (k - 1) + 1, 2 ** (k + 1)):
            for p in (Fraction(1, 7), Fraction(1, 3), Fraction(1, 2)):
                dual_ok &= evaluate_dual(k, n, p) == dual_pue_brute(k, n, p)
    results["dual identity"] = dual_ok

    cache = VerdictCache(tmp_path / "cache")
    for k in (6, 9):
        for n in range(2 ** (k - 1) + 1, 2**k):
            cache.classify(k, n)
            cache.classify(k, n, dual=True)
    results["implication chain on cached verdicts"] = cache.check_all() == len(cache) > 0
    results["cache re-verification"] = cache.reverify(0.01) >= 1

    first = [tables.run_table(i).to_csv() for i in (1, 2, 4)]
    again = [tables.run_table(i).to_csv() for i in (1, 2, 4)]
    results["table determinism"] = first == again

    failed = [name for name, ok in results.items() if not ok]
    report(11, not failed, f"failed {failed}" if failed else ", ".join(results))
