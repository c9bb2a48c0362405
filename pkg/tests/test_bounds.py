import math
from fractions import Fraction

import mpmath
import pytest
from hypothesis import given
from hypothesis import strategies as st

import oracles
from tinygraph.bounds import (LogQuantity, available_collections_log, binom_bounds,
                              binom_bounds_log2, chernoff_bound, claim4_ratio_check,
                              crossover_report, dense_count_beta, dense_count_beta_log2,
                              induced_diversity_lower_bound, isomorphic_pair_union_bound,
                              log2_binom, not_tiny_probability, representable_collections_log,
                              small_dense_probability, sparse_connected_count_and_bound,
                              tiny_constant, verify_crossover, xd_count_log2)


def test_chernoff():
    assert chernoff_bound(10, 5) == pytest.approx(0.68497, abs=1e-4)
    assert chernoff_bound(10, 5) == pytest.approx(oracles.chernoff(10, 5), rel=1e-12)
    assert chernoff_bound(3, 0) == 2.0
    with pytest.raises(ValueError):
        chernoff_bound(-1, 1)


@given(st.floats(0, 1e4), st.floats(0, 1e4))
def test_chernoff_property(mu, t):
    assert chernoff_bound(mu, t) == pytest.approx(oracles.chernoff(mu, t) if t else 2.0, rel=1e-9)


def test_dense_beta():
    assert dense_count_beta(1) == pytest.approx(5.236e6, rel=1e-3)
    assert dense_count_beta(1) == pytest.approx(oracles.beta(1), rel=1e-12)
    assert dense_count_beta(0) == 2.0
    assert dense_count_beta_log2(4) == pytest.approx(math.log2(oracles.beta(4)), rel=1e-12)
    assert tiny_constant(1) == pytest.approx(100 + 3 * oracles.beta(1))


def test_not_tiny():
    nt = not_tiny_probability(10**6, 4)
    assert nt.value == 0.4 == oracles.not_tiny(10**6, 4)
    assert nt.informative
    big = not_tiny_probability(60, 1)
    assert big.value == 1.0 and not big.informative and big.raw > 1


@given(st.integers(0, 400), st.data())
def test_log2_binom_exact(n, data):
    k = data.draw(st.integers(-2, n + 2))
    q = log2_binom(n, k)
    ref = math.comb(n, k) if 0 <= k <= n else 0
    assert q.exact == ref


@pytest.mark.parametrize("n,k", [(10**30, 7), (10**7, 40_000), (2**5000, 3), (10**12, 10**6)])
def test_log2_binom_large_matches_mpmath(n, k):
    if k <= 10:
        # loggamma differences cancel catastrophically for huge n; use the exact integer
        ref = float(mpmath.log(mpmath.mpf(math.comb(n, k)), 2))
    else:
        with mpmath.workdps(80):
            ref = float((mpmath.loggamma(n + 1) - mpmath.loggamma(k + 1)
                         - mpmath.loggamma(n - k + 1)) / mpmath.log(2))
    assert log2_binom(n, k, exact=False).log2_value == pytest.approx(ref, rel=1e-9)


def test_binom_bounds():
    b = binom_bounds(6, 3)
    assert b.lower == 8 and b.exact == 20 and b.upper == pytest.approx(160.68, abs=0.01)
    lo, mid, hi = binom_bounds_log2(100, 30)
    assert lo <= mid.log2_value <= hi
    with pytest.raises(ValueError):
        binom_bounds(3, 4)


def test_log_quantity_validates():
    LogQuantity.of(12)
    with pytest.raises(ValueError):
        LogQuantity(3.0, 12)


@pytest.mark.parametrize("k,count", [(1, 1), (2, 1), (3, 2), (4, 5)])
def test_sparse_connected_count(k, count):
    sc = sparse_connected_count_and_bound(k)
    assert sc.exact == count < 100**k


def test_sparse_connected_count_above_cap():
    assert sparse_connected_count_and_bound(20).exact is None


def test_small_dense_report():
    r = small_dense_probability(10**6, 1, 10)
    assert set(r.per_k) == set(range(5, 11))
    assert r.per_k[5] == pytest.approx((10**6) ** (-5 / (3 * math.log(5))))
    assert r.blanket == 15e-6
    assert r.precondition_holds == (3 * math.log(2 * math.e**2) * math.log(10) <= math.log(10**6))


def test_diversity_bound_and_union_term():
    b = induced_diversity_lower_bound(10**6, 100, 200_000, 0.04)
    ref = 200_000 * (math.log2(0.04) + 0.02 * math.log2(5))
    assert b.value.log2_value == pytest.approx(ref)
    assert b.in_range
    u = isomorphic_pair_union_bound(36, 6, 15, 0.04)
    assert u.mu == pytest.approx(105 / 6)
    assert not induced_diversity_lower_bound(36, 6, 15, 0.04).in_range


def test_binomial_ratio_check():
    c = claim4_ratio_check(100, 10, 0.3)
    ratio = Fraction(math.comb(100, 10), math.comb(100, 7))
    assert c.k_prime == 3
    assert c.lhs_log2 == pytest.approx(math.log2(ratio))
    assert c.holds and c.label == "holds"


def test_representable_small_cases():
    r = representable_collections_log(4, 1)
    assert r.eq3.exact == 2**16 * math.comb(math.comb(4, 4), 4)  # C(1, 4) = 0
    assert r.eq1_log2 == 48
    r = representable_collections_log(3, 2)
    assert r.eq1_log2 == pytest.approx(81 + 27 * 3 * math.log2(9))
    assert r.eq3.exact == 2**81 * math.comb(math.comb(9, 3), 27)
    assert representable_collections_log(2, 1).eq3.log2_value == float("-inf")


def test_available_and_xd_count():
    assert xd_count_log2(1000, 6) == float("-inf")
    n, d = 10**6, 6
    lx = xd_count_log2(n, d)
    ref = math.log2(1 - 200 * math.sqrt(d / n)) - n * math.log2(n) + d * (n - 1) / 2 * math.log2(n / d)
    assert lx == pytest.approx(ref)
    assert available_collections_log(n, 1).log2_value == pytest.approx(n * (lx - math.log2(n)))


@pytest.mark.parametrize("s,expect", [(1, 240001), (2, 320001)])
def test_crossover(s, expect):
    rep = crossover_report(s)
    assert rep.crossover_n == expect
    v = verify_crossover(s, expect)
    assert v[str(expect)]["available_exceeds"] and not v[str(expect - 1)]["available_exceeds"]
