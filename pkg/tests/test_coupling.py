import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from azimodes.coupling import build_coupling, build_h1, build_h2, normalize_variant, truncation_order
from azimodes.oracle import coupling_projection, infeld_series

EPS = np.finfo(float).eps


class TestTruncation:
    def test_zero_tau_floor(self):
        assert truncation_order(0.0, 1e-12) == 8

    def test_series_scan(self):
        n = 8
        while infeld_series(n, 4.0) >= 1e-12:
            n += 1
        assert n == 18
        assert truncation_order(4.0, 1e-12) == n

    def test_gaussian_tail(self):
        estimate = math.sqrt(2 * 1600 * math.log(1e12))
        assert truncation_order(1600.0, 1e-12) == pytest.approx(estimate, rel=0.15)

    @pytest.mark.parametrize("eps", [0.0, 1.0, -1e-3])
    def test_bad_eps(self, eps):
        with pytest.raises(ValueError):
            truncation_order(1.0, eps)


class TestH1:
    def test_zero_tau(self):
        H = build_h1(0.0, 8)
        nonzero = {(n, m) for n in H.indices for m in H.indices if H.entry(n, m) != 0}
        assert nonzero == {(1, 1), (1, -1), (-1, 1), (-1, -1)}
        for n, m in nonzero:
            assert H.entry(n, m) == -0.5

    def test_zero_tau_spectrum(self):
        H = build_h1(0.0, 8)
        w, v = np.linalg.eigh(H.entries)
        nonzero = np.abs(w) > 1e-14
        assert nonzero.sum() == 1
        assert w[nonzero][0] == pytest.approx(-1.0, abs=1e-15)
        vec = v[:, nonzero][:, 0]
        expected = np.zeros(17)
        expected[[8 - 1, 8 + 1]] = 1 / math.sqrt(2)
        assert abs(vec @ expected) == pytest.approx(1.0, abs=1e-14)

    def test_projection_oracle(self):
        H = build_h1(4.0, 20)
        np.testing.assert_allclose(coupling_projection("chi1", 4.0, 20).entries, H.entries, rtol=0, atol=1e-10)

    @given(tau=st.floats(0, 2000), n_max=st.integers(1, 60))
    @settings(max_examples=40, deadline=None)
    def test_exact_symmetry(self, tau, n_max):
        H = build_h1(tau, n_max)
        assert np.array_equal(H.entries, H.entries.T)


class TestH2:
    def test_zero_tau(self):
        H = build_h2(0.0, 8)
        nonzero = {(n, m): H.entry(n, m) for n in H.indices for m in H.indices if H.entry(n, m) != 0}
        assert nonzero == pytest.approx({(0, 0): 1.0, (2, 0): 1 / 6, (-2, 0): 1 / 6})

    def test_zero_tau_singular_value(self):
        s = np.linalg.svd(build_h2(0.0, 8).entries, compute_uv=False)
        assert s[0] == pytest.approx(math.sqrt(19 / 18), abs=1e-15)
        assert np.all(s[1:] < 1e-15)

    def test_projection_oracle(self):
        H = build_h2(4.0, 20)
        np.testing.assert_allclose(coupling_projection("chi2", 4.0, 20).entries, H.entries, rtol=0, atol=1e-10)

    def test_not_symmetric(self):
        H = build_h2(4.0, 10)
        assert not np.allclose(H.entries, H.entries.T)


class TestShared:
    @pytest.mark.parametrize("chi", ["chi1", "chi2"])
    @pytest.mark.parametrize("tau", [0.04, 0.5, 4.0, 40.0])
    def test_projection_oracle_range(self, chi, tau):
        H = build_coupling(chi, tau)
        proj = coupling_projection(chi, tau, H.n_max)
        np.testing.assert_allclose(proj.entries, H.entries, rtol=0, atol=1e-10)

    @pytest.mark.parametrize("chi", ["chi1", "chi2"])
    @given(tau=st.floats(0, 2000), n_max=st.integers(1, 40))
    @settings(max_examples=25, deadline=None)
    def test_parity_decoupling(self, chi, tau, n_max):
        H = build_coupling(chi, tau, n_max)
        idx = H.indices
        mixed = (idx[:, None] - idx[None, :]) % 2 == 1
        assert np.all(H.entries[mixed] == 0)

    @pytest.mark.parametrize("chi", ["chi1", "chi2"])
    @pytest.mark.parametrize("tau", [0.0, 0.04, 4.0, 400.0, 1600.0])
    def test_tail_stability(self, chi, tau):
        n = truncation_order(tau, 1e-12)
        H = build_coupling(chi, tau, n)
        big = build_coupling(chi, tau, math.ceil(1.25 * n))
        off = big.n_max - n
        assert np.array_equal(big.entries[off : off + H.size, off : off + H.size], H.entries)
        J = min(20, H.size)
        a = np.linalg.svd(H.entries, compute_uv=False)[:J]
        b = np.linalg.svd(big.entries, compute_uv=False)[:J]
        # singular values at roundoff level carry no relative information
        floor = 10 * big.size * EPS * a[0]
        assert np.all(np.abs(a - b) <= 1e-10 * a + floor)

    def test_entries_read_only(self):
        H = build_coupling("chi1", 1.0, 8)
        with pytest.raises(ValueError):
            H.entries[0, 0] = 1.0

    def test_default_truncation(self):
        H = build_coupling("chi2", 40.0)
        assert H.n_max == truncation_order(40.0, 1e-12)

    @pytest.mark.parametrize("raw, expected", [(1, "chi1"), ("2", "chi2"), ("chi1", "chi1"), ("CHI2", "chi2")])
    def test_variant_names(self, raw, expected):
        assert normalize_variant(raw) == expected

    @pytest.mark.parametrize("raw", [3, "chi3", "x"])
    def test_bad_variant(self, raw):
        with pytest.raises(ValueError):
            normalize_variant(raw)

    @pytest.mark.parametrize("n_max", [0, -2, 1.5])
    def test_bad_n_max(self, n_max):
        with pytest.raises(ValueError):
            build_h1(1.0, n_max)

    def test_csv(self, tmp_path):
        H = build_h2(0.0, 2)
        path = tmp_path / "h.csv"
        H.to_csv(path)
        lines = path.read_text().splitlines()
        assert lines[0] == "n,-2,-1,0,1,2"
        assert len(lines) == 6
        row = lines[3].split(",")
        assert row[0] == "0"
        assert float(row[3]) == 1.0
