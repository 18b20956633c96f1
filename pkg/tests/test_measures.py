import math

import numpy as np
import pytest
from hypothesis import assume, given
from hypothesis import strategies as st
from scipy.integrate import quad

from whh import measures as ms

LAMBDA_17 = np.linspace(0.05, 0.95, 17)
interior = st.floats(0.02, 0.98)


def quad_nu(lam, f, a=0.0, b=1.0):
    """Independent oracle: QUADPACK with algebraic end-point weights.

    Each power-law term of the density is integrated separately; a term whose
    singular endpoint lies in ``[a, b]`` goes through the ``weight="alg"`` rule.
    """
    p, q = ms.nu_exponents(lam)
    kw = dict(epsabs=1e-14, epsrel=1e-14, limit=400)
    if b == 1.0:
        right = quad(f, a, 1.0, weight="alg", wvar=(0.0, p), **kw)[0]
    else:
        right = quad(lambda t: f(t) * (1.0 - t) ** p, a, b, **kw)[0]
    if a == 0.0:
        left = quad(f, 0.0, b, weight="alg", wvar=(q, 0.0), **kw)[0]
    else:
        left = quad(lambda t: f(t) * t**q, a, b, **kw)[0]
    return (1.0 - lam) * right + lam * left


class TestWeight:
    def test_valid(self):
        assert float(ms.Weight(0.25)) == 0.25
        assert ms.Weight(0.25).complement().lam == 0.75
        assert ms.Weight(0.0).interior() is False

    @pytest.mark.parametrize("bad", [-0.1, 1.5, math.nan])
    def test_invalid(self, bad):
        with pytest.raises(ValueError):
            ms.Weight(bad)

    @pytest.mark.parametrize("a,b", [(0.5, 0.5), (0.7, 0.2), (-0.1, 0.5), (0.0, 1.1)])
    def test_subinterval_invalid(self, a, b):
        with pytest.raises(ValueError):
            ms.SubInterval(a, b)


class TestNuDensity:
    def test_lebesgue_at_half(self):
        assert ms.nu_density(0.5, 0.3) == 1.0

    def test_two_thirds(self):
        expected = (1 / 3) * (3 / 4) ** -0.5 + (2 / 3) * (1 / 4)
        assert ms.nu_density(2 / 3, 0.25) == pytest.approx(expected, rel=1e-15)
        # the quoted 7-digit value 0.5515667 is truncated, not rounded (0.55156685)
        assert expected == pytest.approx(0.5515667, abs=2e-7)

    def test_one_third_mirror(self):
        assert ms.nu_density(1 / 3, 0.75) == pytest.approx(ms.nu_density(2 / 3, 0.25), rel=1e-15)

    def test_exponents(self):
        assert ms.nu_exponents(2 / 3) == pytest.approx((-0.5, 1.0))
        assert ms.nu_exponents(0.5) == (0.0, 0.0)

    def test_array_input(self):
        t = np.array([0.1, 0.5, 0.9])
        np.testing.assert_allclose(ms.nu_density(0.5, t), 1.0)

    def test_singular_endpoint_rejected(self):
        with pytest.raises(ValueError):
            ms.nu_density(2 / 3, 1.0)
        with pytest.raises(ValueError):
            ms.nu_density(0.5, 1.5)
        with pytest.raises(ValueError):
            ms.nu_density(1.0, 0.5)

    @pytest.mark.parametrize("lam", LAMBDA_17)
    def test_symmetry_on_grid(self, lam):
        t = np.linspace(0.01, 0.99, 99)
        np.testing.assert_allclose(ms.nu_density(1 - lam, 1 - t), ms.nu_density(lam, t), rtol=1e-14)

    @pytest.mark.parametrize("lam", LAMBDA_17)
    def test_unit_mass_quadrature(self, lam):
        assert quad_nu(lam, lambda t: 1.0) == pytest.approx(1.0, abs=1e-10)

    @given(interior, st.floats(0.001, 0.999))
    def test_property_symmetry(self, lam, t):
        assert ms.nu_density(1 - lam, 1 - t) == pytest.approx(ms.nu_density(lam, t), rel=1e-13)


class TestMoments:
    @pytest.mark.parametrize("lam", [0.1, 1 / 3, 0.5, 0.8])
    def test_full_interval(self, lam):
        assert ms.nu_moment_xi(lam, (0, 1)) == pytest.approx(lam, abs=1e-15)
        assert ms.nu_mass_chi(lam, (0, 1)) == pytest.approx(1.0, abs=1e-15)

    def test_lebesgue_cases(self):
        assert ms.nu_moment_xi(0.5, (0, 0.5)) == pytest.approx(1 / 8, abs=1e-15)
        assert ms.nu_mass_chi(0.5, (0.25, 0.75)) == pytest.approx(0.5, abs=1e-15)

    def test_quadrature_oracle(self):
        assert ms.nu_moment_xi(2 / 3, (0.2, 0.7)) == pytest.approx(quad_nu(2 / 3, lambda t: t, 0.2, 0.7), abs=1e-10)
        assert ms.nu_mass_chi(2 / 3, (0.2, 0.7)) == pytest.approx(quad_nu(2 / 3, lambda t: 1.0, 0.2, 0.7), abs=1e-10)

    def test_accepts_subinterval(self):
        assert ms.nu_mass_chi(0.3, ms.SubInterval(0.1, 0.4)) == ms.nu_mass_chi(0.3, (0.1, 0.4))

    def test_rejects_bad_interval(self):
        with pytest.raises(ValueError):
            ms.nu_mass_chi(0.3, (0.4, 0.1))

    @given(interior, st.floats(0.0, 1.0), st.floats(0.0, 1.0), st.floats(0.0, 1.0))
    def test_property_additive_and_bracketed(self, lam, x, y, z):
        a, c, b = sorted((x, y, z))
        assume(a < c < b)
        whole = ms.nu_mass_chi(lam, (a, b))
        parts = ms.nu_mass_chi(lam, (a, c)) + ms.nu_mass_chi(lam, (c, b))
        assert whole == pytest.approx(parts, abs=1e-14)
        xi = ms.nu_moment_xi(lam, (a, b))
        # the first moment of a measure on [a, b] lies between a and b times its mass
        assert a * whole - 1e-14 <= xi <= b * whole + 1e-14


class TestMu:
    def test_values(self):
        assert ms.mu_density(0.5, 0.5) == pytest.approx(2 / math.pi, rel=1e-15)
        assert ms.mu_density(0.5, 0.25) == pytest.approx(0.7351, abs=1e-4)

    @pytest.mark.parametrize("lam", [0.2, 0.5, 0.8])
    def test_unit_mass(self, lam):
        total = quad(lambda t: ms.mu_density(lam, t), 0, 1, limit=200)[0]
        assert total == pytest.approx(1.0, abs=1e-9)

    def test_endpoints_rejected(self):
        with pytest.raises(ValueError):
            ms.mu_density(0.5, 0.0)


class TestCoefficients:
    def test_r_R(self):
        assert ms.r_coeff(0.3, 0.3) == 1.0 and ms.R_coeff(0.3, 0.3) == 1.0
        assert ms.r_coeff(0.5, 0.25) == 0.5 and ms.R_coeff(0.5, 0.25) == 1.5
        assert ms.r_coeff(0.25, 0.75) == pytest.approx(1 / 3) and ms.R_coeff(0.25, 0.75) == 3.0

    def test_alpha_xy(self):
        assert ms.alpha_xy(0.5, 0.5) == pytest.approx(0.25)
        assert ms.alpha_xy(0.0, 0.5) == pytest.approx(0.25)
        assert ms.alpha_xy(0.25, 2 / 3) == pytest.approx(8 / 27, rel=1e-14)
        assert ms.alpha_xy(1.0, 0.3, allow_limit=True) == pytest.approx(0.21)
        with pytest.raises(ValueError):
            ms.alpha_xy(1.0, 0.3)

    def test_alpha_xy_limit_is_continuous(self):
        assert ms.alpha_xy(1 - 1e-9, 0.3) == pytest.approx(0.21, rel=1e-6)

    @pytest.mark.parametrize("a", [0.1, 0.37, 0.5, 0.9])
    def test_r_integral_at_half(self, a):
        assert ms.integral_r_closed(a, 0.5) == pytest.approx(0.5, abs=1e-15)

    def test_R_integral_at_half(self):
        assert ms.integral_R_closed(0.5, 0.5) == pytest.approx(1.5, abs=1e-15)

    @pytest.mark.parametrize("a,lam", [(0.5, 2 / 3), (0.2, 0.3), (0.85, 0.9)])
    def test_closed_forms_vs_quadrature(self, a, lam):
        r = lambda b: ms.r_coeff(a, b)
        R = lambda b: ms.R_coeff(a, b)
        g = lambda f: quad_nu(lam, f, 0, a) + quad_nu(lam, f, a, 1)
        assert ms.integral_r_closed(a, lam) == pytest.approx(g(r), abs=1e-8)
        assert ms.integral_R_closed(a, lam) == pytest.approx(g(R), abs=1e-8)

    def test_m_M(self):
        assert ms.m_coeff(0.5, 0.5) == pytest.approx(0.5)
        assert ms.M_coeff(0.5, 0.5) == pytest.approx(1.5)
        # 2(1/9)(1 - 2^-2) + 2(4/9)(1 - 2^-1/2)
        expected = 2 / 9 * 0.75 + 8 / 9 * (1 - 2**-0.5)
        assert ms.m_coeff(0.5, 2 / 3) == pytest.approx(expected, rel=1e-14)
        assert expected == pytest.approx(0.4270162, abs=1e-7)

    def test_m_M_grid(self):
        for a in np.linspace(0.01, 0.99, 50):
            for lam in np.linspace(0.01, 0.99, 50):
                m, M = ms.m_coeff(a, lam), ms.M_coeff(a, lam)
                assert 0.0 <= m <= M

    def test_alpha_beta(self):
        assert ms.alpha_beta(0.5) == pytest.approx((0.5, 1.5))
        lo, hi = ms.alpha_beta(2 / 3)
        assert lo == pytest.approx(0.4270162, abs=1e-7)
        assert hi == pytest.approx(2 - 0.4270162, abs=1e-7)
        for lam in np.arange(1, 10) / 10:
            assert sum(ms.alpha_beta(lam)) == pytest.approx(2.0, abs=1e-14)

    @given(st.floats(0.01, 0.99), st.floats(0.0, 1.0))
    def test_property_r_le_one_le_R(self, a, b):
        assert ms.r_coeff(a, b) <= 1.0 + 1e-15 <= ms.R_coeff(a, b) + 2e-15

    @given(st.floats(0.01, 0.99), interior)
    def test_property_m_equals_r_integral_identity(self, a, lam):
        # m is the nu-integral of r, M the nu-integral of R
        assert ms.m_coeff(a, lam) == pytest.approx(ms.integral_r_closed(a, lam), rel=1e-12)
        assert ms.M_coeff(a, lam) == pytest.approx(ms.integral_R_closed(a, lam), rel=1e-12)
