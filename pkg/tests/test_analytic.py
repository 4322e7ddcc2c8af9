from __future__ import annotations

import math

import numpy as np
import pytest
import scipy.linalg
from hypothesis import given, settings
from hypothesis import strategies as st

from steklab import analytic
from steklab.errors import ParameterError
from steklab.spectrum import BOUNDARY_LAPLACIAN, STEKLOV


def mode_oracle(k: int, rho: float, R: float) -> np.ndarray:
    """Steklov eigenvalues of Fourier mode ``k`` from the 2x2 boundary system.

    Radial part ``f = A g1 + B g2``; ``f'(R) = s f(R)`` and ``-f'(rho) = s f(rho)``
    form the generalized eigenproblem ``D c = s V c``.
    """
    if k == 0:
        g = [lambda r: 1.0, lambda r: math.log(r)]
        dg = [lambda r: 0.0, lambda r: 1.0 / r]
    else:
        g = [lambda r: r**k, lambda r: r ** (-k)]
        dg = [lambda r: k * r ** (k - 1), lambda r: -k * r ** (-k - 1)]
    D = np.array([[dg[0](R), dg[1](R)], [-dg[0](rho), -dg[1](rho)]])
    V = np.array([[g[0](R), g[1](R)], [g[0](rho), g[1](rho)]])
    return np.sort(scipy.linalg.eigvals(D, V).real)


class TestDisk:
    def test_unit_disk(self):
        s = analytic.steklov_disk(1.0, 7)
        assert s.values.tolist() == [0, 1, 1, 2, 2, 3, 3]
        assert s.kind == STEKLOV and s.is_analytic

    def test_scaling(self):
        s = analytic.steklov_disk(2.0, 5)
        assert s.values.tolist() == [0, 0.5, 0.5, 1, 1]

    def test_circle(self):
        lam = analytic.laplacian_circle(2 * math.pi, 5)
        assert lam.values.tolist() == [0, 1, 1, 4, 4]
        lam = analytic.laplacian_circle(1.0, 3)
        assert lam.at(2) == pytest.approx((2 * math.pi) ** 2, rel=1e-15)

    @pytest.mark.parametrize("bad", [0.0, -1.0, math.inf, math.nan])
    def test_bad_radius(self, bad):
        with pytest.raises(ParameterError):
            analytic.steklov_disk(bad, 3)

    @pytest.mark.parametrize("count", [0, -2, 1.5, True])
    def test_bad_count(self, count):
        with pytest.raises(ParameterError):
            analytic.steklov_disk(1.0, count)


class TestAnnulus:
    @pytest.mark.parametrize("rho", [0.1, 0.3, 0.5, 0.9])
    @pytest.mark.parametrize("k", [0, 1, 2, 5, 12])
    def test_modes_match_oracle(self, rho, k):
        got = analytic.annulus_modes(rho, 1.0, k)[k][1:]
        assert np.allclose(got, mode_oracle(k, rho, 1.0), rtol=1e-10, atol=1e-12)

    def test_known_values(self):
        s = analytic.steklov_annulus(0.5, 1.0, 30)
        assert s.at(1) == 0.0
        assert s.at(2) == s.at(3) == pytest.approx(mode_oracle(1, 0.5, 1.0)[0], rel=1e-12)
        # mode 0: (1/rho + 1/R) / log(R/rho)
        assert np.isclose(s.values, 3 / math.log(2), rtol=1e-12).sum() == 1

    def test_spectrum_is_sorted_union(self):
        rho, R, count = 0.4, 1.3, 40
        s = analytic.steklov_annulus(rho, R, count)
        pool = list(mode_oracle(0, rho, R))
        for k in range(1, 60):
            pool += 2 * list(mode_oracle(k, rho, R))
        assert np.allclose(s.values, np.sort(pool)[:count], rtol=1e-9, atol=1e-12)

    def test_thin_annulus_high_modes_stable(self):
        s = analytic.steklov_annulus(0.99, 1.0, 30)
        assert np.all(np.isfinite(s.values)) and np.all(np.diff(s.values) >= 0)

    def test_bad_radii(self):
        with pytest.raises(ParameterError):
            analytic.steklov_annulus(1.0, 0.5, 3)


@settings(max_examples=40, deadline=None)
@given(st.floats(0.05, 0.95), st.integers(1, 8))
def test_annulus_mode_property(rho, k):
    lo, hi = analytic.annulus_modes(rho, 1.0, k)[k][1:]
    assert 0 < lo < hi
    assert np.allclose([lo, hi], mode_oracle(k, rho, 1.0), rtol=1e-8)


class TestPartialZeta:
    def test_values(self):
        assert analytic.partial_zeta(1, 2) == 1.0
        assert analytic.partial_zeta(3, 1) == pytest.approx(11 / 6, rel=1e-15)
        assert analytic.partial_zeta(math.inf, 2) == pytest.approx(math.pi**2 / 6, rel=1e-15)

    def test_converges_to_limit(self):
        assert math.pi**2 / 6 - analytic.partial_zeta(10_000, 2) == pytest.approx(1e-4, rel=1e-3)

    @pytest.mark.parametrize("n, e", [(math.inf, 1), (0, 2), (2.5, 2)])
    def test_errors(self, n, e):
        with pytest.raises(ParameterError):
            analytic.partial_zeta(n, e)


class TestDispatch:
    def test_disk_boundary(self):
        lam = analytic.spectrum_for(analytic.DiskDomain(1.0), 5, BOUNDARY_LAPLACIAN)
        assert lam.values.tolist() == [0, 1, 1, 4, 4]

    def test_annulus_boundary_union(self):
        lam = analytic.spectrum_for(analytic.AnnulusDomain(0.5, 1.0), 6, BOUNDARY_LAPLACIAN)
        # outer circle: 0, 1, 1, 4, ...; inner circle (L = pi): 0, 4, 4, ...
        assert lam.values.tolist() == [0, 0, 1, 1, 4, 4]

    def test_circle_has_no_steklov(self):
        with pytest.raises(ParameterError):
            analytic.spectrum_for(analytic.CircleDomain(1.0), 3, STEKLOV)
