import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy.special import ive

from azimodes.coupling import truncation_order
from azimodes.oracle import infeld_quadrature, infeld_series
from azimodes.specfun import scaled_infeld, scaled_infeld_row, start_order

# e^{-tau} I_n(tau) from mpmath.besseli at 30 digits
E1_I0_1 = 0.46575960759364043650
E1_I1_1 = 0.20791041534970844887
E35_I2_35 = 0.11571673709475059910
E1600_I0_1600 = 0.0099743364682876627020


class TestExamples:
    def test_zero_argument(self):
        np.testing.assert_array_equal(scaled_infeld_row(0.0, 3).values, [1.0, 0.0, 0.0, 0.0])

    def test_unit_argument(self):
        row = scaled_infeld_row(1.0, 1).values
        np.testing.assert_allclose(row, [E1_I0_1, E1_I1_1], rtol=1e-14)
        np.testing.assert_allclose(row, [infeld_series(0, 1.0), infeld_series(1, 1.0)], rtol=1e-14)

    def test_large_argument(self):
        value = scaled_infeld_row(1600.0, 0).values[0]
        assert value == pytest.approx(infeld_quadrature(0, 1600.0), rel=1e-10)
        assert value == pytest.approx(E1600_I0_1600, rel=1e-12)
        assert value == pytest.approx(1.0 / math.sqrt(2 * math.pi * 1600), rel=1e-3)

    @pytest.mark.parametrize("n, tau, expected", [(0, 0.0, 1.0), (5, 0.0, 0.0), (2, 3.5, E35_I2_35)])
    def test_single_value(self, n, tau, expected):
        assert scaled_infeld(n, tau) == pytest.approx(expected, rel=1e-13, abs=0)

    def test_single_value_matches_series(self):
        assert scaled_infeld(2, 3.5) == pytest.approx(infeld_series(2, 3.5), rel=1e-13)


class TestInvariants:
    @pytest.mark.parametrize("tau", [0.04, 4.0, 400.0, 1600.0])
    def test_recurrence_residual(self, tau):
        row = scaled_infeld_row(tau, truncation_order(tau, 1e-16) + 5).values
        n = np.arange(1, len(row) - 1)
        resid = np.abs(row[n - 1] - row[n + 1] - 2 * n / tau * row[n])
        assert resid.max() <= 1e-10 * row[0]

    @pytest.mark.parametrize("tau", [1e-5, 0.04, 1.0, 4.0, 40.0, 400.0, 1600.0])
    def test_sum_rule(self, tau):
        row = scaled_infeld_row(tau, truncation_order(tau, 1e-16)).values
        assert row[0] + 2 * row[1:].sum() == pytest.approx(1.0, abs=1e-12)

    @pytest.mark.parametrize("tau", [0.5, 4.0, 40.0, 400.0])
    def test_quadrature_agreement(self, tau):
        row = scaled_infeld_row(tau, 50).values
        quad = np.array([infeld_quadrature(n, tau) for n in range(51)])
        np.testing.assert_allclose(row, quad, rtol=1e-10, atol=0)

    @pytest.mark.parametrize("tau", [1e-4, 1e-3, 2e-3, 0.7, 55.0, 700.0, 710.0, 5000.0])
    def test_scipy_agreement(self, tau):
        row = scaled_infeld_row(tau, 60).values
        ref = ive(np.arange(61), tau)
        mask = ref > 1e-280
        np.testing.assert_allclose(row[mask], ref[mask], rtol=1e-12)

    @settings(max_examples=60, deadline=None)
    @given(tau=st.floats(1e-6, 3000.0), n_max=st.integers(0, 120))
    def test_positive_decreasing(self, tau, n_max):
        row = scaled_infeld_row(tau, n_max).values
        assert np.all(row >= 0)
        assert np.all(row <= 1.0)
        assert np.all(np.diff(row) <= 0)
        assert np.all(np.isfinite(row))

    @settings(max_examples=40, deadline=None)
    @given(tau=st.floats(1e-3, 2000.0), n_max=st.integers(0, 60), extra=st.integers(1, 80))
    def test_longer_rows_agree(self, tau, extra, n_max):
        short = scaled_infeld_row(tau, n_max).values
        long = scaled_infeld_row(tau, n_max + extra).values[: n_max + 1]
        mask = short > 1e-250
        np.testing.assert_allclose(short[mask], long[mask], rtol=1e-12)

    def test_subnormal_tau(self):
        row = scaled_infeld_row(5e-324, 3).values
        assert row[0] == 1.0
        assert np.all(np.isfinite(row))

    def test_row_is_read_only(self):
        row = scaled_infeld_row(2.0, 4)
        assert row.n_max == 4
        with pytest.raises(ValueError):
            row.values[0] = 1.0


class TestStartOrder:
    def test_margin_floor(self):
        assert start_order(0.5, 10) >= 30

    def test_tail_term_for_small_order(self):
        # normalisation needs roughly sqrt(tau) orders beyond zero
        assert start_order(1600.0, 0) >= math.sqrt(2 * 1600 * 40)


class TestErrors:
    @pytest.mark.parametrize("tau", [-1.0, float("nan"), float("inf")])
    def test_bad_tau(self, tau):
        with pytest.raises(ValueError):
            scaled_infeld_row(tau, 3)

    @pytest.mark.parametrize("n_max", [-1, 2.5])
    def test_bad_order(self, n_max):
        with pytest.raises(ValueError):
            scaled_infeld_row(1.0, n_max)

    def test_bad_single_order(self):
        with pytest.raises(ValueError):
            scaled_infeld(-1, 1.0)
