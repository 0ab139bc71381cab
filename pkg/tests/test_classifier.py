from fractions import Fraction

import pytest

from simplexdet import classifier as cl
from simplexdet import rootiso
from simplexdet.errors import InvariantViolation, ParameterError
from simplexdet.uepoly import UePolynomial, evaluate, pue_of
from simplexdet.weights import weight_distribution


# --- single verdicts ------------------------------------------------------------

@pytest.mark.parametrize("k,n,want", [(9, 320, False), (9, 384, True), (9, 307, True), (9, 308, False),
                                      (9, 330, False), (9, 331, True)])
def test_is_proper_examples(k, n, want):
    assert cl.is_proper(k, n) is want
    assert cl.is_proper(k, n, method="dense") is want


def test_good_and_satisfactory_examples():
    assert cl.is_good(9, 384) and cl.is_satisfactory(9, 384)
    assert not cl.is_satisfactory(9, 320)
    assert not cl.is_satisfactory(9, 320, method="dense")
    assert not cl.is_good(9, 320, method="dense")


def test_classify_routes():
    v = cl.classify(9, 384)
    assert (v.proper, v.good, v.satisfactory, v.decided_by) == (True, True, True, cl.BOUNDARY_LENGTH)
    v = cl.classify(9, 320)
    assert v.decided_by == cl.MIN_WEIGHT and v.ugly_by_min_weight and v.satisfactory is False
    v = cl.classify(16, 58369)
    assert v.decided_by == cl.WEIGHT_REFINEMENT and not v.ugly_by_min_weight
    assert v.satisfactory is False and v.ugly_witness_weight == weight_distribution(16, 58369).d + 1


def test_classify_rejects_bad_lengths():
    with pytest.raises(ParameterError):
        cl.classify(9, 256)
    with pytest.raises(ParameterError):
        cl.classify(1, 5)


def test_verdict_invariants_enforced():
    with pytest.raises(InvariantViolation):
        cl.Verdict(9, 300, False, True, False, True, False, None, cl.ORACLE)
    with pytest.raises(InvariantViolation):
        cl.Verdict(9, 300, False, None, None, None, True, 128, cl.ORACLE)
    with pytest.raises(ParameterError):
        cl.Verdict(9, 300, False, True, True, True, False, None, "guess")


def test_decide_proper_matches_is_proper():
    for n in (300, 307, 308, 320, 331, 384):
        got, route = cl.decide_proper(9, n)
        assert got is cl.is_proper(9, n)
        assert route in cl.DECIDED_BY


# --- ugliness from single weights -----------------------------------------------

def test_min_weight_criterion_examples():
    assert cl.ugly_by_min_weight(9, 315) and not cl.ugly_by_min_weight(9, 314)
    assert cl.ugly_by_min_weight(9, 324) and not cl.ugly_by_min_weight(9, 325)
    assert not cl.ugly_by_min_weight(16, 58369)
    assert cl.ugly_by_min_weight(17, 66546) and not cl.ugly_by_min_weight(17, 66545)


def test_weight_refinement_example():
    dist = weight_distribution(16, 58369)
    assert dist.d + 1 == 28673
    assert cl.ugly_by_weight(16, 58369, 28673)
    assert not cl.ugly_by_weight(16, 58369, dist.d)
    # the margins behind both answers: about 0.989 and 1.91 times the needed count
    ratio_d = dist.a_d / cl.weight_threshold(16, 58369, dist.d).mid
    ratio_next = dist.entries[28673] / cl.weight_threshold(16, 58369, 28673).mid
    assert abs(float(ratio_d) - 0.989) < 5e-3 and abs(float(ratio_next) - 1.9106) < 5e-3


def test_lone_middle_weight_is_never_enough():
    for n in range(2 * 9 + 2, 80, 2):
        assert not cl.ugly_by_weight(9, n, n // 2, count=1)


def test_exact_and_certified_agree():
    for k, n in [(9, 314), (9, 315), (9, 324), (9, 325), (12, 2219), (12, 2218)]:
        dist = weight_distribution(k, n)
        assert cl.ugly_by_weight(k, n, dist.d, dist.a_d) == cl._exact_exceeds(k, n, dist.d, dist.a_d)


def test_weight_threshold_table_values():
    for n, level in [(66545, 62.4), (66546, 61.5), (66592, 30.3), (66593, 29.8)]:
        d = weight_distribution(17, n).d
        assert abs(float(cl.weight_threshold(17, n, d).mid) - level) < 0.05


# --- derivative polynomial --------------------------------------------------------

def test_derivative_single_term():
    q = cl.derivative_polynomial(UePolynomial(7, 3, ((7, 4),)))
    assert q.coeffs == (28, -49)


def test_derivative_low_coefficient_and_sign():
    poly = pue_of(9, 320)
    q = cl.derivative_polynomial(poly)
    assert q.coeffs[0] == 2 * 128 == 256
    assert len(q.coeffs) - 1 <= poly.max_weight - poly.d + 1
    eps = Fraction(1, 10**6)
    half = Fraction(1, 2)
    diff = evaluate(poly, half) - evaluate(poly, half - 2 * eps)
    assert (q(half - eps) > 0) == (diff > 0)


def test_derivative_matches_exact_difference():
    poly = pue_of(6, 45)
    q = cl.derivative_polynomial(poly)
    for p in (Fraction(1, 7), Fraction(1, 3), Fraction(9, 20)):
        h = Fraction(1, 10**9)
        slope = (evaluate(poly, p + h) - evaluate(poly, p - h)) / (2 * h)
        scale = p ** (poly.d - 1) * (1 - p) ** (poly.n - poly.max_weight - 1)
        assert abs(slope - scale * q(p)) < Fraction(1, 10**6) * abs(slope) + Fraction(1, 10**30)


def test_derivative_roots_match_proper_verdict():
    # proper iff Q has no odd root in (0, 1/2); Q is in p, so rescale to [0, 1]
    for n in (300, 307, 308, 320, 331):
        q = list(cl.derivative_polynomial(pue_of(9, n)).coeffs)
        scaled = [c * 2 ** (len(q) - 1 - i) for i, c in enumerate(q)]
        assert rootiso.nonnegative_on_01(scaled) is cl.is_proper(9, n)


# --- sufficient conditions ------------------------------------------------------------

def test_tau_floor_examples():
    for k in range(6, 15):
        assert cl.tau_floors(k, 1, 2 ** (k - 5) - 1)[1] == 2 ** (k - 3) - 2
        for m in range(1, k - 1):
            if k <= 2 * m + 3:
                assert cl.tau_floors(k, m, 1)[0] == 2 ** (k - m - 2)


def test_tau_floors_rejects_bad_band():
    with pytest.raises(ParameterError):
        cl.tau_floors(9, 0, 1)
    with pytest.raises(ParameterError):
        cl.tau_floors(9, 1, 0)


def test_whole_band_threshold():
    assert cl.whole_band_threshold(9, 1) == 3
    assert cl.whole_band_threshold(12, 1) == 5
    for k in range(6, 14):
        assert cl.whole_band_threshold(k, 2 ** (k - 5)) == 1


def test_whole_band_really_proper_k12():
    # bands m >= 5 of the first block at k = 12
    lo = cl.whole_band_start(12, 1)
    for n in range(lo, 2**12, 7):
        assert cl.is_proper(12, n)


def test_sufficient_interval_9_1_1():
    for rng in cl.sufficient_proper_interval(9, 1, 1):
        for n in range(rng[0], rng[1] + 1):
            assert cl.is_proper(9, n, method="dense")
            assert cl.is_proper(9, n, skip_first_row=True, method="dense")


@pytest.mark.slow
def test_shortcut_soundness():
    for k in range(4, 11):
        hi = 2 ** (k - 1) * 4 if k <= 8 else 2**k - 1
        for n in range(2 ** (k - 1) + 1, hi):
            if cl.shortcut_proper(k, n) is not None:
                assert cl.is_proper(k, n), (k, n)
                assert cl.is_proper(k, n, skip_first_row=True), (k, n)


@pytest.mark.slow
def test_min_weight_soundness():
    for k in range(4, 11):
        for n in range(2 ** (k - 1) + 1, 2**k):
            if cl.ugly_by_min_weight(k, n):
                assert not cl.is_satisfactory(k, n), (k, n)
                assert not cl.is_satisfactory(k, n, method="dense"), (k, n)


def test_lifting_soundness():
    for k in range(4, 9):
        step = 2 ** (k - 1)
        for n in range(step + 1, 2**k):
            if cl.is_proper(k, n, skip_first_row=True, method="dense"):
                for u in (1, 2, 3):
                    assert cl.is_proper(k, n + step * u, method="dense"), (k, n, u)


def test_lifting_index():
    idx = cl.LiftingIndex()
    idx.add(9, 300)
    assert idx.covers(9, 300 + 256 * 5) and not idx.covers(9, 301) and not idx.covers(9, 44)
    idx.add(9, 300 + 256)
    assert len(idx) == 1


# --- route agreement ---------------------------------------------------------------

def test_sparse_and_dense_agree():
    for k in (5, 6, 7, 9):
        for n in range(2 ** (k - 1) + 1, 2**k, 3 if k < 9 else 11):
            poly = pue_of(k, n)
            assert cl.poly_is_proper(poly) == cl.poly_is_proper(poly, "dense"), (k, n)
            assert cl.poly_is_good(poly) == cl.poly_is_good(poly, "dense"), (k, n)
            assert cl.poly_is_satisfactory(poly) == cl.poly_is_satisfactory(poly, "dense"), (k, n)
            assert cl.is_proper(k, n, True) == cl.is_proper(k, n, True, "dense"), (k, n)


def test_implication_chain_holds():
    for k in (6, 9):
        for n in range(2 ** (k - 1) + 1, 2**k, 5):
            cl.check_implications(cl.classify(k, n))
            cl.check_implications(cl.classify(k, n, dual=True))


# --- dual -------------------------------------------------------------------------

def test_dual_satisfactory_equivalence():
    for k in range(3, 7):
        for n in range(2 ** (k - 1) + 1, 2 ** (k - 1) * 4):
            primal = cl.is_satisfactory(k, n, method="dense")
            assert cl.is_satisfactory(k, n, dual=True, method="dense") == primal, (k, n)
            assert cl.is_satisfactory(k, n, dual=True) == primal, (k, n)


def test_dual_routes_agree():
    for k in range(3, 7):
        for n in range(2 ** (k - 1) + 1, 2**k + 4):
            assert cl.dual_is_proper(k, n) == cl.dual_is_proper(k, n, "dense"), (k, n)
            assert cl.dual_is_good(k, n) == cl.dual_is_good(k, n, "dense"), (k, n)


def test_dual_proper_where_min_weight_criterion_fails():
    # including the non-proper primal run 308..330
    for n in list(range(257, 512, 9)) + list(range(308, 331)):
        if cl.ugly_by_min_weight(9, n):
            assert cl.classify(9, n, dual=True).proper is False
        else:
            assert cl.classify(9, n, dual=True).proper is True, n


def test_dual_of_an_ugly_code_is_not_proper():
    # the dual is satisfactory exactly when the primal is, so (9, 320) rules it out
    v = cl.classify(9, 320, dual=True)
    assert (v.proper, v.satisfactory) == (False, False)
