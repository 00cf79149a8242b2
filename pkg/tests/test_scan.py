from concurrent.futures import ThreadPoolExecutor

import numpy as np
import pytest

from azimodes.decomp import mode_function
from azimodes.physics import ExperimentConfig, ValidityError
from azimodes.scan import KSCAN_HEADER, decompose_at, mode_gallery, scan_k
from azimodes.scatter import bogolyubov_gains, effective_mode_number

THZ = 1e12
CFG = ExperimentConfig()


def low_gain_K(chi, f):
    dec = decompose_at(CFG, chi, f)
    return effective_mode_number(bogolyubov_gains(dec, 0.01 / abs(dec.values[0])))


class TestRegimes:
    def test_single_mode_at_lowest_frequency(self):
        assert low_gain_K("chi1", 0.01 * THZ) == pytest.approx(1.0, abs=0.05)

    @pytest.mark.parametrize("chi", ["chi1", "chi2"])
    def test_tens_of_modes_at_two_terahertz(self, chi):
        assert 20 <= low_gain_K(chi, 2 * THZ) <= 100

    def test_gain_reduces_mode_number(self):
        dec = decompose_at(CFG, "chi1", 0.5 * THZ)
        high = effective_mode_number(bogolyubov_gains(dec, 2.0))
        low = effective_mode_number(bogolyubov_gains(dec, 0.01))
        assert high < low

    @pytest.mark.parametrize("chi", ["chi1", "chi2"])
    def test_linear_growth(self, chi):
        f = np.linspace(0.2, 2.0, 10) * THZ
        K = np.array([low_gain_K(chi, x) for x in f])
        slope, intercept = np.polyfit(f, K, 1)
        resid = K - (slope * f + intercept)
        r2 = 1 - resid @ resid / np.sum((K - K.mean()) ** 2)
        assert r2 >= 0.98

    def test_out_of_range(self):
        with pytest.raises(ValidityError):
            decompose_at(CFG, "chi1", 2.5 * THZ)


class TestScanK:
    def test_rows_sorted_by_gain_then_frequency(self):
        f = [0.5 * THZ, 0.1 * THZ, 0.3 * THZ]
        result = scan_k(CFG, "chi1", f, [1.0, 0.01])
        keys = [(r.gain_ref, r.f_THz) for r in result.rows]
        assert keys == sorted(keys)
        assert len(result.rows) == 6

    def test_gain_ordering(self):
        f = np.linspace(0.1, 2.0, 6) * THZ
        result = scan_k(CFG, "chi2", f, [0.01, 0.5, 1.0, 2.0])
        K = np.array([[r.K for r in result.select(g)] for g in (0.01, 0.5, 1.0, 2.0)])
        assert np.all(np.diff(K, axis=0) <= 0)

    def test_schema(self):
        result = scan_k(CFG, "chi1", [0.2 * THZ], [0.5])
        row = result.rows[0]
        assert tuple(vars(row)) == KSCAN_HEADER
        assert row.n_max >= 8
        assert row.K >= 1

    def test_pump_scaled_gain_column(self):
        cfg = ExperimentConfig(gain_model="pump_scaled", gain_ref_frequency=1 * THZ)
        result = scan_k(cfg, "chi1", [0.5 * THZ, 2 * THZ], [2.0])
        np.testing.assert_allclose(result.column("gainLG"), [1.0, 4.0])

    def test_executor_does_not_change_output(self, tmp_path):
        f = np.linspace(0.05, 1.0, 5) * THZ
        serial = scan_k(CFG, "chi1", f, [0.01, 1.0])
        with ThreadPoolExecutor(4) as pool:
            parallel = scan_k(CFG, "chi1", f[::-1], [1.0, 0.01], executor=pool)
        serial.to_csv(tmp_path / "a.csv")
        parallel.to_csv(tmp_path / "b.csv")
        assert (tmp_path / "a.csv").read_bytes() == (tmp_path / "b.csv").read_bytes()

    @pytest.mark.parametrize("gains", [[0.0], [-1.0], []])
    def test_rejects_gains(self, gains):
        with pytest.raises(ValueError):
            scan_k(CFG, "chi1", [0.1 * THZ], gains)

    def test_rejects_frequency(self):
        with pytest.raises(ValidityError):
            scan_k(CFG, "chi1", [0.1 * THZ, 3 * THZ], [0.01])


class TestGallery:
    def test_leading_mode_dominates(self):
        gal = mode_gallery(CFG, "chi1", 0.01 * THZ, J=4)
        mags = np.abs(gal.values)
        assert mags[0] >= 10 * mags[1]

    def test_top_even_and_odd_close(self):
        gal = mode_gallery(CFG, "chi1", 0.1 * THZ, J=8)
        mags = np.abs(gal.values)
        even = mags[[p == "even" for p in gal.parity]][0]
        odd = mags[[p == "odd" for p in gal.parity]][0]
        assert abs(even - odd) <= 0.05 * max(even, odd)

    @pytest.mark.parametrize("f", [0.01, 0.03, 0.05])
    def test_chi2_sides_differ_at_low_frequency(self, f):
        dec = mode_gallery(CFG, "chi2", f * THZ, J=1).decomposition
        a = np.abs(mode_function(dec, 0, "idler", 256).samples) ** 2
        b = np.abs(mode_function(dec, 0, "signal", 256).samples) ** 2
        assert np.max(np.abs(a - b)) > 1e-3

    @pytest.mark.parametrize("f", [0.01, 0.05, 0.5])
    def test_chi1_sides_identical(self, f):
        gal = mode_gallery(CFG, "chi1", f * THZ, J=6)
        np.testing.assert_allclose(gal.idler, gal.signal, atol=1e-10)

    def test_clamps_mode_count(self):
        gal = mode_gallery(CFG, "chi1", 0.01 * THZ, J=500)
        assert len(gal.idler) == len(gal.decomposition)
        assert gal.idler.shape == gal.signal.shape
