import math

import numpy as np
import pytest

from hexsep.thresh import (
    P_C,
    ThresholdParams,
    cell_diameter,
    circumradius,
    connectivity_radius_scale,
    critical_radius_estimate,
    expected_classes,
    hex_count,
    majority_n,
    threshold_interval_length,
)

# reference values computed once with a 30-digit arbitrary-precision
# script and frozen here
R_10_3 = 0.037267799624996495
R_4_2 = 0.10206207261596575
R0STAR_10_3 = 0.10196723314583158
R0STAR_4_2 = 0.17603103630798288
DELTA_10_3 = 0.12939886704167017
DELTA_4_2 = 0.14793792738403425
PC_REF = 0.652703644666


class TestHexCount:
    def test_frozen_values(self):
        assert hex_count(10, 3) == 180
        assert hex_count(4, 2) == 24
        assert hex_count(1, 1) == 1
        assert hex_count(7, 1) == 49

    def test_integer_identity(self):
        for m in range(1, 40):
            for n in range(1, m + 1):
                assert hex_count(m, n) == m * m + 2 * m * (n - 1) ** 2

    def test_validation(self):
        with pytest.raises(ValueError):
            hex_count(0, 1)
        with pytest.raises(ValueError):
            hex_count(3, 4)
        with pytest.raises(ValueError):
            hex_count(3, 0)
        with pytest.raises(ValueError):
            hex_count(3.5, 1)


class TestCircumradius:
    def test_frozen_values(self):
        assert circumradius(10, 3) == pytest.approx(R_10_3, rel=1e-15)
        assert circumradius(4, 2) == pytest.approx(R_4_2, rel=1e-15)

    def test_diameter_doubles(self):
        for m, n in ((10, 3), (4, 2), (17, 5)):
            assert cell_diameter(m, n) == 2.0 * circumradius(m, n)

    def test_inverse_square_identity(self):
        for m in range(2, 30, 3):
            for n in range(1, m, 2):
                r = circumradius(m, n)
                assert 1.0 / (4.0 * r * r) == pytest.approx(hex_count(m, n))

    def test_decreasing_in_n(self):
        for m in (5, 12, 40):
            values = [circumradius(m, n) for n in range(1, m + 1)]
            assert all(a > b for a, b in zip(values, values[1:]))


class TestCriticalOccupancy:
    def test_value(self):
        assert P_C == pytest.approx(PC_REF, abs=1e-9)

    def test_closed_form(self):
        assert P_C == 1.0 - 2.0 * math.sin(math.pi / 18.0)

    def test_below_two_thirds(self):
        assert 0.65 < P_C < 0.66


class TestExpectedClasses:
    def test_frozen_values(self):
        n_real, k = expected_classes(8, 0.5)
        assert n_real == pytest.approx(3.0)
        assert k == 9
        n_real, k = expected_classes(10, P_C)
        assert n_real == pytest.approx(2.6310868864624534, rel=1e-12)
        assert k == 9
        n_real, k = expected_classes(50, 0.5)
        assert n_real == pytest.approx(6.0)
        assert k == 36

    def test_clamped_by_m(self):
        # a single sample cell can never hold more than one class
        n_real, k = expected_classes(1, 0.3)
        assert n_real > 2.0
        assert k == 1

    def test_side_count_consistency(self):
        rng = np.random.default_rng(6)
        for _ in range(100):
            m = int(rng.integers(1, 200))
            rho = float(rng.uniform(0.01, P_C))
            n_real, k = expected_classes(m, rho)
            side = int(math.isqrt(k))
            assert side * side == k
            assert 1 <= side <= m
            assert side + 1 > n_real or side == m

    def test_rho_validation(self):
        for bad in (0.0, -0.1, P_C + 1e-9, 0.9):
            with pytest.raises(ValueError):
                expected_classes(10, bad)


class TestMajorityN:
    def test_frozen_values(self):
        assert majority_n(2) == 2
        assert majority_n(8) == 3
        assert majority_n(10) == 3
        assert majority_n(50) == 6
        assert majority_n(100) == 8

    def test_rounding_rule(self):
        for m in range(1, 300):
            assert majority_n(m) == math.floor(1.0 + math.sqrt(m / 2.0) + 0.5)

    def test_within_grid(self):
        for m in range(2, 300):
            assert 1 <= majority_n(m) <= m


class TestRadiusEstimates:
    def test_frozen_values(self):
        assert critical_radius_estimate(10, 3) == pytest.approx(R0STAR_10_3, rel=1e-15)
        assert critical_radius_estimate(4, 2) == pytest.approx(R0STAR_4_2, rel=1e-15)
        assert threshold_interval_length(10, 3) == pytest.approx(DELTA_10_3, rel=1e-15)
        assert threshold_interval_length(4, 2) == pytest.approx(DELTA_4_2, rel=1e-15)

    def test_midpoint_and_gap_identities(self):
        for m in range(2, 60, 7):
            for n in range(1, m, 3):
                r = circumradius(m, n)
                mid = critical_radius_estimate(m, n)
                gap = threshold_interval_length(m, n)
                assert 2.0 * mid == pytest.approx(1.0 / (2 * n) + r, rel=1e-15)
                assert gap + r == pytest.approx(1.0 / (2 * n), rel=1e-15)
                assert r < mid < 1.0 / (2 * n)
                assert gap > 0

    def test_degenerate_single_cell(self):
        # m = n = 1 collapses the interval to nothing
        with pytest.raises(ValueError):
            threshold_interval_length(1, 1)


class TestConnectivityScale:
    def test_frozen_values(self):
        assert connectivity_radius_scale(3) == pytest.approx(
            0.60514799530586171, rel=1e-15)
        assert connectivity_radius_scale(100) == pytest.approx(
            0.21459660262893472, rel=1e-15)

    def test_decreasing_past_e(self):
        values = [connectivity_radius_scale(n) for n in range(3, 4000, 97)]
        assert all(a > b for a, b in zip(values, values[1:]))

    def test_validation(self):
        with pytest.raises(ValueError):
            connectivity_radius_scale(1)


class TestParamsBundle:
    def test_explicit_n(self):
        p = ThresholdParams.compute(10, n=3)
        assert (p.m, p.n) == (10, 3)
        assert p.s == 180
        assert p.r == circumradius(10, 3)
        assert p.b == cell_diameter(10, 3)
        assert p.r0_star == critical_radius_estimate(10, 3)
        assert p.delta_star == threshold_interval_length(10, 3)
        assert p.p_c == P_C

    def test_n_derived_from_rho(self):
        p = ThresholdParams.compute(10, rho=0.5)
        assert p.n == 4
        assert p.rho == 0.5
        _, k = expected_classes(10, 0.5)
        assert p.n == math.isqrt(k)

    def test_default_uses_majority_rule(self):
        p = ThresholdParams.compute(12)
        assert p.n == majority_n(12)
