"""Property-based checks of the core identities and bound orderings."""

import math
from fractions import Fraction as F

import pytest
from hypothesis import assume, given, settings
from hypothesis import strategies as st

from binotail.bounds import (
    ratio_bounds,
    relative_entropy,
    tail_bounds,
    upper_tail_ratio_bounds,
)
from binotail.exact import (
    BinomialParams,
    TailTable,
    entropy_factor_exact,
    lower_tail_exact,
    pmf_exact,
    upper_tail_exact,
)
from binotail.validate import GridSpec

WIDTH_CAP_LOG = math.log(89 / 44)

probabilities = st.fractions(min_value=F(1, 50), max_value=F(49, 50),
                             max_denominator=50)
sizes = st.integers(min_value=1, max_value=80)


@st.composite
def lower_tail_points(draw):
    """(n, k, p) with 1 <= k <= pn and k <= n - 1."""
    n = draw(st.integers(min_value=2, max_value=80))
    p = draw(probabilities)
    kmax = (p.numerator * n) // p.denominator
    assume(kmax >= 1)
    k = draw(st.integers(min_value=1, max_value=min(kmax, n - 1)))
    return n, k, p


@st.composite
def upper_tail_points(draw):
    """(n, k, p) with pn < k <= n - 1."""
    n = draw(st.integers(min_value=2, max_value=80))
    p = draw(probabilities)
    kmin = -((-p.numerator * n) // p.denominator) + 1
    assume(kmin <= n - 1)
    k = draw(st.integers(min_value=kmin, max_value=n - 1))
    return n, k, p


class TestExactIdentities:
    @given(n=sizes, p=probabilities, data=st.data())
    def test_reflection(self, n, p, data):
        k = data.draw(st.integers(min_value=0, max_value=n))
        lhs = upper_tail_exact(n, k, p).value
        rhs = lower_tail_exact(n, n - k, 1 - p).value
        assert lhs == rhs

    @given(n=sizes, p=probabilities, data=st.data())
    def test_complement(self, n, p, data):
        k = data.draw(st.integers(min_value=0, max_value=n - 1))
        total = (lower_tail_exact(n, k, p).value
                 + upper_tail_exact(n, k + 1, p).value)
        assert total == 1

    @given(n=sizes, p=probabilities)
    def test_pmf_table_sums_to_one(self, n, p):
        table = TailTable(n, p)
        assert table.cdf(n) == 1
        acc = F(0)
        for k in range(n + 1):
            acc += table.pmf(k)
            assert table.cdf(k) == acc

    @given(n=sizes, p=probabilities, data=st.data())
    def test_pmf_matches_closed_form(self, n, p, data):
        k = data.draw(st.integers(min_value=0, max_value=n))
        want = (math.comb(n, k) * p ** k * (1 - p) ** (n - k))
        assert pmf_exact(n, k, p).value == want

    @given(p=probabilities)
    def test_entropy_vanishes_on_the_diagonal(self, p):
        assert relative_entropy(float(p), float(p)) == 0.0

    @given(n=st.integers(min_value=1, max_value=60),
           data=st.data())
    def test_entropy_factor_is_one_at_f_equals_p(self, n, data):
        k = data.draw(st.integers(min_value=0, max_value=n))
        assume(0 < k < n)
        assert entropy_factor_exact(n, k, F(k, n)) == 1


class TestBoundOrderings:
    @given(point=lower_tail_points())
    @settings(max_examples=150)
    def test_ratio_chain(self, point):
        n, k, p = point
        rb = ratio_bounds(BinomialParams(n, k, p))
        ratio = float(lower_tail_exact(n, k, p).value
                      / pmf_exact(n, k, p).value)
        slack = 1 + 1e-12
        assert 1 <= rb.lower * slack
        assert rb.lower <= ratio * slack
        assert ratio <= rb.upper * slack
        assert rb.upper < 2 * rb.lower * slack

    @given(point=lower_tail_points())
    @settings(max_examples=150)
    def test_tail_bracket_and_width(self, point):
        n, k, p = point
        tb = tail_bounds(BinomialParams(n, k, p))
        B = float(lower_tail_exact(n, k, p).value)
        slack = 1 + 1e-11
        assert tb.b_down.value <= B * slack
        assert B <= tb.b_up.value * slack
        assert tb.b_up.log - tb.b_down.log < WIDTH_CAP_LOG + 1e-12
        assert tb.chernoff.value * slack >= B

    @given(point=upper_tail_points())
    @settings(max_examples=100)
    def test_upper_tail_ratio_chain(self, point):
        n, k, p = point
        rb = upper_tail_ratio_bounds(BinomialParams(n, k, p))
        ratio = float(upper_tail_exact(n, k, p).value
                      / pmf_exact(n, k, p).value)
        slack = 1 + 1e-12
        assert rb.lower <= ratio * slack
        assert ratio <= rb.upper * slack

    @given(point=lower_tail_points())
    @settings(max_examples=100)
    def test_reverse_chernoff_floors_the_pmf(self, point):
        n, k, p = point
        tb = tail_bounds(BinomialParams(n, k, p))
        pmf = float(pmf_exact(n, k, p).value)
        slack = 1 + 1e-11
        assert tb.reverse_type.value <= pmf * slack
        assert tb.reverse_ash.value <= pmf * slack


class TestGridProperties:
    @given(ns=st.lists(st.integers(min_value=1, max_value=40), min_size=1,
                       max_size=6),
           rule=st.sampled_from(("all-k", "lower-tail-k", "upper-tail-k")))
    def test_point_count_matches_k_ranges(self, ns, rule):
        grid = GridSpec(n_values=tuple(ns), p_values=(F(1, 4), F(2, 3)),
                        k_rule=rule)
        count = sum(len(grid.k_range(n, p))
                    for n in grid.n_values for p in grid.p_values)
        assert count == sum(1 for _ in grid.points())

    @given(ns=st.lists(st.integers(min_value=1, max_value=40), min_size=1,
                       max_size=6))
    def test_tail_rules_partition_all_k(self, ns):
        base = dict(n_values=tuple(ns), p_values=(F(1, 4), F(2, 3)))
        lower = GridSpec(k_rule="lower-tail-k", **base)
        upper = GridSpec(k_rule="upper-tail-k", **base)
        full = GridSpec(k_rule="all-k", **base)
        for n in full.n_values:
            for p in full.p_values:
                lo = set(lower.k_range(n, p))
                hi = set(upper.k_range(n, p))
                assert lo | hi == set(full.k_range(n, p))
                overlap = lo & hi
                assert overlap == ({(p.numerator * n) // p.denominator}
                                   if (p * n).denominator == 1 else set())


class TestDegenerateEndpoints:
    @given(n=sizes, p=probabilities)
    def test_full_tail_is_one(self, n, p):
        assert lower_tail_exact(n, n, p).value == 1

    @given(n=sizes, p=probabilities)
    def test_empty_tail_is_pmf(self, n, p):
        assert lower_tail_exact(n, 0, p).value == pmf_exact(n, 0, p).value

    @given(n=sizes, p=probabilities)
    def test_bounds_reject_out_of_range_k(self, n, p):
        with pytest.raises(ValueError):
            BinomialParams(n, n + 1, p)
