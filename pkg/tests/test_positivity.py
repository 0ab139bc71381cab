import random
from fractions import Fraction

from simplexdet import rootiso as ri
from simplexdet.positivity import (ONE_PLUS_X, X, certify_nonnegative, certify_with_escalation,
                                   is_nonnegative_exact_sample, normalize, value_at_one, value_at_zero)


def _dense(terms):
    """Expand a sparse term list (small exponents) into integer coefficients, after clearing denominators."""
    from math import comb, lcm
    den = 1
    for c, _, _ in terms:
        den = lcm(den, Fraction(c).denominator)
    size = max(e for _, _, e in terms) + 1
    out = [0] * size
    for c, b, e in terms:
        c = int(c * den)
        if b == X:
            out[e] += c
        else:
            for i in range(e + 1):
                out[i] += c * comb(e, i)
    return out


def test_endpoint_values():
    terms = [(Fraction(3), ONE_PLUS_X, 4), (Fraction(-2), X, 0), (Fraction(-5), X, 3)]
    assert value_at_zero(terms) == 1
    assert value_at_one(terms) == 3 * 16 - 7
    big = [(Fraction(5, 2**40000000), ONE_PLUS_X, 40000000), (Fraction(-5), X, 7)]
    assert value_at_one(big) == 0


def test_normalize_merges():
    assert normalize([(1, X, 2), (2, X, 2), (-3, X, 2), (1, ONE_PLUS_X, 1)]) == [(Fraction(1), ONE_PLUS_X, 1)]


def test_simple_verdicts():
    # (1 - 2x)^2 touches zero inside: the engine must not claim a sign, the dense route decides
    sq = [(Fraction(1), X, 0), (Fraction(-4), X, 1), (Fraction(4), X, 2)]
    assert certify_with_escalation(sq).status is None
    assert ri.nonnegative_on_01(_dense(sq))
    assert certify_with_escalation(sq + [(Fraction(1, 100), X, 0)]).status is True
    # 1/2 - x: negative on (1/2, 1]
    r = certify_nonnegative([(Fraction(1, 2), X, 0), (Fraction(-1), X, 1)])
    assert r.status is False and is_nonnegative_exact_sample([(Fraction(1, 2), X, 0), (Fraction(-1), X, 1)], r.witness) < 0


def test_against_dense_route():
    rng = random.Random(3)
    agree = 0
    for _ in range(200):
        terms = []
        for _ in range(rng.randint(2, 5)):
            c = Fraction(rng.randint(-20, 20) or 1, rng.randint(1, 4))
            terms.append((c, rng.choice([X, ONE_PLUS_X]), rng.randint(0, 12)))
        terms = normalize(terms)
        if not terms:
            continue
        res = certify_with_escalation(terms, max_nodes=5000)
        if res.status is None:
            continue
        assert res.status == ri.nonnegative_on_01(_dense(terms)), terms
        agree += 1
    assert agree > 150


def test_huge_exponents_are_cheap():
    n = 10**9
    terms = [(Fraction(1, 2**64), ONE_PLUS_X, 64), (Fraction(-1, 2), X, 64)]
    assert certify_with_escalation(terms).status is True
    terms = [(Fraction(1), X, n), (Fraction(-1), X, n + 1)]
    res = certify_with_escalation(terms)
    assert res.status is True and res.nodes < 2000
