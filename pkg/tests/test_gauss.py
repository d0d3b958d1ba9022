"""Tests for the Gaussian tail coefficient module.

Frozen digits below were produced by an independent mpmath evaluation at
40 significant digits of the closed forms ell(x) = (sqrt(4+x^2)-x)/(2
sqrt(2 pi)) and upsilon(x) = (2-x)/sqrt(2 pi) (x <= 1), 1/(x sqrt(2 pi))
(x >= 1), cross-checked against mp.ncdf for the enclosure statements.
"""

import math

import mpmath
import pytest

from binotail.bounds import Interval
from binotail.exact import gaussian_upper_tail
from binotail.gauss import (
    GaussianBoundPair,
    coeff_pair,
    mills_coeff_lower,
    mills_coeff_upper,
    tail_bracket,
    tail_coeff_lower,
    tail_coeff_upper,
)

ROOT_2PI = math.sqrt(2 * math.pi)


class TestCoefficientValues:
    def test_lower_at_zero_is_exactly_inverse_root(self):
        assert tail_coeff_lower(0.0) == 1 / ROOT_2PI
        assert tail_coeff_lower(0.0) == pytest.approx(0.3989422804014327, rel=1e-15)

    def test_upper_at_zero_is_exactly_twice_lower(self):
        assert tail_coeff_upper(0.0) == 2 * tail_coeff_lower(0.0)

    def test_half_over_lower_at_zero_is_exactly_sqrt_half_pi(self):
        # Phi(0) = 1/2, so the ratio Phi(-x) e^{x^2/2} / ell(x) starts at
        # exactly sqrt(pi/2); the float evaluation reproduces it bitwise.
        assert 0.5 / tail_coeff_lower(0.0) == math.sqrt(math.pi / 2)

    def test_values_at_one(self):
        assert tail_coeff_lower(1.0) == pytest.approx(0.246559888837, abs=1e-10)
        assert tail_coeff_upper(1.0) == pytest.approx(0.398942280401, abs=1e-10)

    def test_upper_branches_agree_at_junction(self):
        left = (2 - 1.0) / ROOT_2PI
        right = 1 / (1.0 * ROOT_2PI)
        assert left == right
        assert tail_coeff_upper(1.0) == left

    def test_values_at_fractional_point(self):
        assert tail_coeff_lower(0.3) == pytest.approx(0.34356407351, abs=1e-10)
        assert tail_coeff_upper(0.3) == pytest.approx(0.678201876682, abs=1e-10)

    def test_negative_argument_rejected(self):
        for fn in (tail_coeff_lower, tail_coeff_upper, mills_coeff_lower,
                   mills_coeff_upper, tail_bracket):
            with pytest.raises(ValueError, match="nonnegative"):
                fn(-0.5)


class TestMillsVariants:
    def test_scaling_relation(self):
        for x in (0.0, 0.25, 1.0, 2.5, 7.0):
            assert mills_coeff_lower(x) == pytest.approx(
                ROOT_2PI * tail_coeff_lower(x), rel=1e-15)
            assert mills_coeff_upper(x) == pytest.approx(
                ROOT_2PI * tail_coeff_upper(x), rel=1e-15)

    def test_exact_values(self):
        assert mills_coeff_lower(0.0) == 1.0
        assert mills_coeff_upper(0.0) == 2.0
        assert mills_coeff_upper(1.0) == 1.0
        assert mills_coeff_upper(2.0) == 0.5

    def test_lower_at_large_x_has_no_cancellation(self):
        # The difference form (sqrt(4+x^2)-x)/2 loses all digits near
        # x ~ 1e8; the reciprocal form keeps full relative accuracy.
        x = 1e8
        assert mills_coeff_lower(x) == pytest.approx(1 / x, rel=1e-15)
        assert mills_coeff_lower(x) > 0


class TestEnclosure:
    # Oracle values float(gaussian_upper_tail(x)) are the certified
    # Taylor / continued-fraction evaluations of Phi(-x).
    POINTS = (0.3, 1.0, 2.0, 4.7)

    def test_bracket_contains_normal_tail(self):
        for x in self.POINTS:
            phi = float(gaussian_upper_tail(x))
            box = tail_bracket(x)
            assert box.lo < phi < box.hi, x

    def test_companion_cap_attained_at_zero(self):
        # sqrt(pi/2) ell(0) = 1/2 = Phi(0); the upsilon cap stays strict.
        assert float(gaussian_upper_tail(0)) == 0.5
        cap = math.sqrt(math.pi / 2) * tail_coeff_lower(0.0)
        assert cap == pytest.approx(0.5, rel=1e-15)
        assert tail_bracket(0.0).hi > 0.5

    def test_frozen_bracket_at_one(self):
        box = tail_bracket(1.0)
        assert box.lo == pytest.approx(0.149546132035, abs=1e-10)
        assert box.hi == pytest.approx(0.241970724519, abs=1e-10)
        assert box.contains(0.158655253931)

    def test_companion_upper_bound_with_sqrt_half_pi(self):
        # Phi(-x) <= sqrt(pi/2) ell(x) e^{-x^2/2}, equality at x = 0.
        for x in (0.0, 0.2, 0.7, 1.3, 2.9, 5.0):
            phi = float(gaussian_upper_tail(x))
            cap = math.sqrt(math.pi / 2) * tail_coeff_lower(x) * math.exp(-x * x / 2)
            assert phi <= cap * (1 + 1e-15), x

    def test_width_never_exceeds_two(self):
        for x in (0.0, 0.5, 1.0, 1.5, 3.0, 10.0, 100.0):
            pair = coeff_pair(x)
            assert pair.ell < pair.upsilon or x == 0.0
            assert pair.upsilon <= 2 * pair.ell
            assert 1.0 <= pair.width_ratio <= 2.0


class TestMonotoneRatios:
    def test_width_ratio_strictly_decreasing(self):
        xs = [0.1 * j for j in range(0, 60)]
        ratios = [coeff_pair(x).width_ratio for x in xs]
        assert all(a > b for a, b in zip(ratios, ratios[1:]))

    def test_tail_over_lower_coeff_strictly_decreasing(self):
        # Phi(-x) e^{x^2/2} / ell(x) decreases from sqrt(pi/2) toward 1.
        xs = [0.0, 0.5, 1.0, 2.0, 3.0, 5.0]
        vals = []
        for x in xs:
            phi = float(gaussian_upper_tail(x))
            vals.append(phi * math.exp(x * x / 2) / tail_coeff_lower(x))
        assert vals[0] == pytest.approx(math.sqrt(math.pi / 2), rel=1e-15)
        assert all(a > b for a, b in zip(vals, vals[1:]))
        assert vals[-1] == pytest.approx(1.00117197181, abs=1e-9)


class TestAsymptotics:
    def test_mills_limit(self):
        x = 1e6
        assert ROOT_2PI * x * tail_coeff_lower(x) == pytest.approx(1.0, abs=1e-11)
        assert tail_coeff_upper(x) / tail_coeff_lower(x) == pytest.approx(1.0, abs=1e-11)

    def test_far_tail_bracket_underflows_to_zero_cleanly(self):
        box = tail_bracket(40.0)
        assert isinstance(box, Interval)
        assert box.lo == 0.0 and box.hi == 0.0


class TestPrecisionBackend:
    def test_matches_float_route(self):
        for x in (0.0, 0.3, 1.0, 2.0, 4.7):
            for fn in (tail_coeff_lower, tail_coeff_upper,
                       mills_coeff_lower, mills_coeff_upper):
                hi = fn(x, dps=50)
                assert isinstance(hi, mpmath.mpf)
                assert float(hi) == pytest.approx(fn(x), rel=1e-13)

    def test_high_precision_junction(self):
        with mpmath.workdps(50):
            gap = tail_coeff_upper(mpmath.mpf(1), dps=50) - 1 / mpmath.sqrt(2 * mpmath.pi)
            assert abs(gap) < mpmath.mpf(10) ** -45


class TestBoundPairType:
    def test_invariant_enforced(self):
        with pytest.raises(ValueError, match="ell <= upsilon <= 2 ell"):
            GaussianBoundPair(ell=0.4, upsilon=0.9, x=0.0)
        with pytest.raises(ValueError, match="ell <= upsilon <= 2 ell"):
            GaussianBoundPair(ell=0.4, upsilon=0.3, x=0.0)

    def test_fields(self):
        pair = coeff_pair(2.0)
        assert pair.x == 2.0
        assert pair.ell == tail_coeff_lower(2.0)
        assert pair.upsilon == tail_coeff_upper(2.0)
