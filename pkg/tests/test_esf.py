import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from incprob.esf import esf_all, esf_leave_one_out, esf_leave_two_out

from helpers import brute_esf


def table_values(t):
    return np.array([t.value(k) for k in range(t.degree + 1)])


class TestWorkedValues:
    def test_single_weight(self):
        t = esf_all([1.0])
        np.testing.assert_allclose(table_values(t), [1.0, 1.0])

    def test_three_weights(self):
        t = esf_all([0.5, 0.3, 0.2])
        # e_2 = 0.15 + 0.10 + 0.06, e_3 = 0.5*0.3*0.2
        np.testing.assert_allclose(table_values(t), [1.0, 1.0, 0.31, 0.03], rtol=1e-12)

    @pytest.mark.parametrize("m,c", [(4, 0.7), (6, 2.5), (9, 0.01)])
    def test_equal_weights_binomial(self, m, c):
        t = esf_all([c] * m)
        expect = [math.comb(m, k) * c**k for k in range(m + 1)]
        np.testing.assert_allclose(table_values(t), expect, rtol=1e-12)

    def test_leave_one_out_worked(self):
        w = [0.5, 0.3, 0.2]
        np.testing.assert_allclose(
            table_values(esf_leave_one_out(w, 0)), [1.0, 0.5, 0.06], rtol=1e-12
        )
        np.testing.assert_allclose(
            table_values(esf_leave_one_out(w, 2)), [1.0, 0.8, 0.15], rtol=1e-12
        )

    def test_leave_two_out_worked(self):
        np.testing.assert_allclose(
            table_values(esf_leave_two_out([0.5, 0.3, 0.2], 0, 1)), [1.0, 0.2], rtol=1e-12
        )
        np.testing.assert_allclose(
            table_values(esf_leave_two_out([0.4, 0.3, 0.2, 0.1], 1, 3)),
            [1.0, 0.6, 0.08],
            rtol=1e-12,
        )


class TestBruteForceOracle:
    def test_random_tables_match_subset_sums(self):
        rng = np.random.default_rng(20260809)
        for m in range(1, 13):
            w = rng.uniform(0.0, 3.0, size=m)
            t = esf_all(w)
            for k in range(m + 1):
                expect = brute_esf(w, k)
                assert t.value(k) == pytest.approx(expect, rel=1e-12)

    def test_leave_one_out_matches_brute(self):
        rng = np.random.default_rng(7)
        w = rng.uniform(0.1, 2.0, size=8)
        for i in range(8):
            t = esf_leave_one_out(w, i)
            rest = np.delete(w, i)
            for k in range(t.degree + 1):
                assert t.value(k) == pytest.approx(brute_esf(rest, k), rel=1e-12)

    def test_leave_two_out_is_leave_one_out_twice(self):
        rng = np.random.default_rng(8)
        w = rng.uniform(0.0, 1.0, size=7)
        t2 = esf_leave_two_out(w, 1, 4)
        once = np.delete(w, 4)  # removing the higher index first keeps 1 stable
        t1 = esf_leave_one_out(once, 1)
        np.testing.assert_allclose(table_values(t2), table_values(t1), rtol=1e-14)


class TestErrors:
    def test_empty_input(self):
        with pytest.raises(ValueError):
            esf_all([])

    def test_negative_weight(self):
        with pytest.raises(ValueError):
            esf_all([0.5, -0.1])

    def test_all_zero(self):
        with pytest.raises(ValueError):
            esf_all([0.0, 0.0])

    def test_index_out_of_range(self):
        with pytest.raises(ValueError):
            esf_leave_one_out([1.0, 2.0], 2)
        with pytest.raises(ValueError):
            esf_leave_one_out([1.0, 2.0], -1)

    def test_leave_two_same_index(self):
        with pytest.raises(ValueError):
            esf_leave_two_out([1.0, 2.0, 3.0], 1, 1)


class TestConventionsAndScaling:
    def test_e0_is_one_for_any_index(self):
        w = [3.0, 0.0, 1.5, 2.0]
        for i in range(4):
            assert esf_leave_one_out(w, i).value(0) == 1.0

    def test_out_of_range_orders_are_zero(self):
        t = esf_all([0.5, 0.5])
        assert t.value(-1) == 0.0
        assert t.value(3) == 0.0
        assert t.log_value(3) == -math.inf

    def test_zero_weights_contribute_nothing(self):
        a = table_values(esf_all([0.4, 0.6]))
        b = esf_all([0.4, 0.0, 0.6])
        np.testing.assert_allclose(np.array([b.value(k) for k in range(3)]), a)
        assert b.value(3) == 0.0

    def test_overflow_activates_log_scale(self):
        w = np.full(5, 1e80)
        t = esf_all(w)
        assert t.log_scale != 0.0
        # log e_k = log C(5,k) + k log 1e80, checked against exact logs
        for k in range(6):
            expect = math.log(math.comb(5, k)) + k * 80 * math.log(10.0)
            assert t.log_value(k) == pytest.approx(expect, rel=1e-12)

    def test_top_value_is_product_after_unscaling(self):
        w = np.array([2e150, 3e150, 1.5e100])
        t = esf_all(w)
        assert t.log_value(3) == pytest.approx(np.log(w).sum(), rel=1e-13)


prob_weights = st.lists(
    st.floats(
        min_value=0.0,
        max_value=100.0,
        allow_nan=False,
        allow_infinity=False,
        allow_subnormal=False,
    ),
    min_size=1,
    max_size=10,
).filter(lambda w: any(x > 0 for x in w))


@given(prob_weights, st.randoms(use_true_random=False))
@settings(max_examples=100, deadline=None)
def test_permutation_invariance(w, pyrandom):
    perm = list(w)
    pyrandom.shuffle(perm)
    a = table_values(esf_all(w))
    b = table_values(esf_all(perm))
    np.testing.assert_allclose(a, b, rtol=1e-14, atol=0.0)


@given(prob_weights, st.floats(min_value=0.01, max_value=50.0))
@settings(max_examples=100, deadline=None)
def test_homogeneity(w, c):
    base = table_values(esf_all(w))
    scaled = table_values(esf_all([c * x for x in w]))
    expect = base * c ** np.arange(len(base))
    np.testing.assert_allclose(scaled, expect, rtol=1e-12)


@given(
    st.lists(
        st.floats(min_value=1e-3, max_value=1e3, allow_nan=False),
        min_size=3,
        max_size=12,
    )
)
@settings(max_examples=100, deadline=None)
def test_newton_inequality_for_positive_weights(w):
    t = table_values(esf_all(w))
    m = len(w)
    for k in range(1, m):
        # log-concavity of the table: e_{k-1} e_{k+1} <= e_k^2
        assert t[k - 1] * t[k + 1] <= t[k] ** 2 * (1 + 1e-9)
