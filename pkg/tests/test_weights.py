import pytest

from simplexdet.construction import BinaryMatrix, build_dkst, build_generalized, build_hk_prefix, decompose
from simplexdet.errors import BudgetExceeded
from simplexdet.weights import (a_d, alpha_vector, brute_force_distribution, first_row_weight, min_distance,
                                residual_row_weights, row_weights, weight_distribution)


def test_alpha_examples():
    assert alpha_vector(9, 320).alpha == (0, 1, 0, 1, 1, 1, 1, 1, 1)
    # read straight off column 11 of the constructed matrix
    col = build_hk_prefix(4, 11).column(10)
    assert alpha_vector(4, 11).alpha == tuple((col >> (3 - i)) & 1 for i in range(4))
    for k in range(4, 9):
        for m in range(1, k - 1):
            a = alpha_vector(k, 2**k - 2 ** (k - m - 1)).alpha
            assert a == (0,) * m + (1,) * (k - m)


def test_alpha_matches_last_column():
    for k in range(3, 8):
        for n in range(2 ** (k - 1) + 1, 2**k):
            col = build_hk_prefix(k, n).column(n - 1)
            assert alpha_vector(k, n).alpha == tuple((col >> (k - 1 - i)) & 1 for i in range(k))


def test_row_weight_examples():
    assert residual_row_weights(9, 320) == (256, 192, 128, 160, 160, 160, 160, 160, 160)
    for k in range(3, 8):
        assert set(residual_row_weights(k, 2**k - 1)) == {2 ** (k - 1)}


def test_row_weights_match_matrix():
    for k in range(3, 8):
        for n in range(2 ** (k - 1), 2 ** (k + 1)):
            assert row_weights(k, n).w == build_generalized(k, n).row_weights()


def test_row_weight_ordering():
    # w_1 = ... = w_m >= w_{m+1} > w_k >= w_{k-1} >= ... >= w_{m+2}, w_{m+1} > n'/2, d = w_{m+2}
    for k in range(4, 12):
        for n in range(2 ** (k - 1) + 1, 2**k):
            m = decompose(k, n).m
            w = residual_row_weights(k, n)
            assert len(set(w[:m])) == 1
            assert 2 * w[m] > n
            if m > k - 2:
                continue
            assert w[0] >= w[m] > w[k - 1]
            assert list(w[m + 1:]) == sorted(w[m + 1:])
            if n < 2**k - 2 ** (k - m - 1):
                assert min_distance(k, n) == w[m + 1]


def test_distribution_examples():
    assert weight_distribution(9, 320).entries == {128: 2, 160: 504, 192: 4, 256: 1}
    assert weight_distribution(3, 7).entries == {4: 7}
    for k in range(4, 9):
        for m in range(1, k - 1):
            n = 2**k - 2 ** (k - m - 1)
            # m+1 leading rows of weight 2^(k-1)
            assert weight_distribution(k, n).entries == {n // 2: 2**k - 2 ** (m + 1), 2 ** (k - 1): 2 ** (m + 1) - 1}


def test_reed_muller_residual():
    for k in range(3, 7):
        for t in range(1, 5):
            n = 2 ** (k - 1) * t
            want = brute_force_distribution(build_generalized(k, n)).entries
            assert weight_distribution(k, n).entries == want == {n // 2: 2**k - 2, n: 1}


def test_distribution_totals():
    for k in range(3, 10):
        for n in range(2 ** (k - 1) + 1, 2 ** (k + 1), 3):
            dist = weight_distribution(k, n)
            assert dist.total() == 2**k - 1
            assert dist.d == min(dist.entries) and dist.max_weight <= n


def test_min_distance_examples():
    assert (min_distance(9, 320), a_d(9, 320)) == (128, 2)
    assert (min_distance(16, 58369), a_d(16, 58369)) == (2**15 - 2**12, 8)
    assert a_d(17, 66545) == 62 and a_d(17, 66561) == 30


def test_min_distance_closed_forms_agree_with_distribution():
    for k in range(4, 12):
        for n in range(2 ** (k - 1) + 1, 2 ** (k + 1)):
            dist = weight_distribution(k, n)
            assert min_distance(k, n) == dist.d
            assert a_d(k, n) == dist.a_d


def test_first_row_weight():
    for k in range(3, 7):
        for n in range(2 ** (k - 1), 2 ** (k + 1)):
            assert first_row_weight(k, n) == build_generalized(k, n).row_weights()[0]


def test_brute_force_small_cases():
    assert brute_force_distribution(build_hk_prefix(4, 11)) == weight_distribution(4, 11)
    a = brute_force_distribution(build_dkst(4, 11)).entries
    assert a == weight_distribution(4, 11).entries


def test_brute_force_budget():
    with pytest.raises(BudgetExceeded):
        brute_force_distribution(BinaryMatrix(30, 1, (1,) * 30))


def test_closed_form_equals_enumeration_small():
    for k in range(3, 7):
        for n in range(2 ** (k - 1), 2 ** (k + 1) + 1):
            assert weight_distribution(k, n) == brute_force_distribution(build_generalized(k, n))
