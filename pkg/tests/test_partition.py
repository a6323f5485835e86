import cmath
import math

import numpy as np
import pytest
from scipy.integrate import quad

from conftest import B_UNIT_5, B_UNIT_6, rel
from teichlevel.an_core import ANPoint, Contour, ModularParam
from teichlevel.charged import ChargeTriple, nu
from teichlevel.qdilog import phi_b
from teichlevel.partition import (KnotAngleData, PoleOnContour, StripViolation, Unbalanced,
                                  chi41_band, chi52_band, chi_41, chi_52, default_offset_41,
                                  default_offset_52, h_limit_41, h_limit_52, phi_b_arr,
                                  phi_charged_arr, phi_tilde_arr, richardson, sigma_41, tetra_kernel,
                                  z_41)

O = (np.zeros(1), 0)


class TestKernels:
    @pytest.mark.parametrize("b", [0.8, B_UNIT_5])
    def test_positive_at_origin(self, b):
        p = ModularParam(b, 1)
        ch = ChargeTriple(0.3, 0.25)
        K = tetra_kernel(1, ch, p)
        want = nu(ch.a - ch.c, p) * cmath.exp(1j * math.pi * p.c_b ** 2 * ch.a * (ch.a + ch.c)) \
            * phi_tilde_arr(np.zeros(1), 0, ch.a, ch.c, p)[0]
        assert rel(K(O, O, O, O)[0], want) < 1e-14

    @pytest.mark.parametrize("b", [0.8, B_UNIT_5])
    def test_negative_at_origin(self, b):
        p = ModularParam(b, 3)
        ch = ChargeTriple(0.2, 0.25, 3)
        K = tetra_kernel(-1, ch, p)
        want = nu(ch.b - ch.c, p) * cmath.exp(1j * math.pi * p.c_b ** 2 * ch.b * (ch.b + ch.c)) \
            * cmath.exp(-1j * math.pi * 3 / 12) * phi_charged_arr(np.zeros(1), 0, ch.b, ch.c, p)[0]
        assert rel(K(O, O, O, O)[0], want) < 1e-14

    def test_delta_constraints(self):
        p = ModularParam(0.8, 3)
        ch = ChargeTriple(0.2, 0.25, 3)
        Kp, Km = tetra_kernel(1, ch, p), tetra_kernel(-1, ch, p)
        assert Kp.delta_constraint == (1, -1, 1, 0)
        assert Km.delta_constraint == (-1, 1, 0, 1)
        pts = [(0.3, 1), (0.5, 2), (0.2, 1), (9.0, 2)]
        x, n = Kp.delta_argument(*pts, N=3)
        assert x == pytest.approx(0.0) and n == 0
        with pytest.raises(ValueError):
            tetra_kernel(0, ch, p)

    @pytest.mark.parametrize("b", [0.8, B_UNIT_6])
    @pytest.mark.parametrize("N", [1, 3])
    def test_conjugate_form(self, b, N):
        """phi_{b,c} written through conj(phi~_{a,c}) at the reflected point."""
        p = ModularParam(b, N)
        ch = ChargeTriple(0.3 / p.sqrtN, 0.2 / p.sqrtN, N)
        K0, K1 = tetra_kernel(-1, ch, p), tetra_kernel(-1, ch, p, conjugate_form=True)
        xs = np.array([-0.6, 0.1, 0.45])
        for n in range(N):
            a1, a3 = (np.full(3, 0.2), (n + 1) % N), (xs, n)
            v0, v1 = K0(O, a1, O, a3), K1(O, a1, O, a3)
            assert np.max(np.abs(v0 - v1) / np.abs(v0)) < 1e-12

    def test_conjugate_form_wrong_epsilon(self):
        p = ModularParam(0.8, 3)
        ch = ChargeTriple(0.3 / p.sqrtN, 0.2 / p.sqrtN, 3)
        K0, K1 = tetra_kernel(-1, ch, p), tetra_kernel(-1, ch, p, conjugate_form=True, epsilon=1)
        a3 = (np.array([0.1]), 1)
        assert abs(K0(O, O, O, a3)[0] - K1(O, O, O, a3)[0]) > 1e-3


class TestAngles:
    def test_lambda_and_balance(self):
        A = KnotAngleData.figure_eight((0.7, 0.2), (0.75, 0.1))
        assert A.lam == pytest.approx(0.4)
        assert A.is_balanced()
        B = KnotAngleData.figure_eight((0.7, 0.2), (0.7, 0.1))
        assert not B.is_balanced()
        with pytest.raises(Unbalanced):
            z_41(B, ModularParam(0.5, 1))

    def test_five_two_balance(self):
        A = KnotAngleData.five_two([(0.2, 0.3), (0.4, 0.4), (0.3, 0.2)])
        assert A.is_balanced()

    def test_wrong_shape(self):
        with pytest.raises(ValueError):
            KnotAngleData("4_1", (ChargeTriple(0.3, 0.3),), (1,))
        with pytest.raises(ValueError):
            KnotAngleData("3_1", (), ())


class TestContours:
    def test_bands(self):
        p = ModularParam(0.5, 1)
        g = abs(p.c_b.imag)
        assert chi41_band(0.0, p) == (pytest.approx(-g), 0.0)
        assert chi41_band(-0.3j, p) == (pytest.approx(-g), -0.3)
        assert chi52_band(0.2j, p) == (pytest.approx(-g + 0.2), 0.0)

    def test_defaults_inside(self):
        for b in (0.2, 0.5, 1.0, B_UNIT_5):
            p = ModularParam(b, 3)
            lo, hi = chi41_band(0.0, p)
            assert lo < default_offset_41(0.0, p) < hi
            lo, hi = chi52_band(0.0, p)
            assert lo < default_offset_52(0.0, p) < hi

    def test_pole_on_contour(self):
        p = ModularParam(0.5, 1)
        with pytest.raises(PoleOnContour):
            chi_41(0.0, 0.0, p, Contour(0.0))
        with pytest.raises(PoleOnContour):
            chi_52(0.0, 0.0, p, Contour(chi52_band(0.0, p)[0]))

    def test_strip_violation(self):
        p = ModularParam(0.5, 1)
        with pytest.raises(StripViolation):
            chi_41(0.0, 0.0, p, Contour(0.3))
        with pytest.raises(StripViolation):
            chi_52(0.0, 0.0, p, Contour(-5.0))


def _chi41_integrand(x, d, p):
    def f(t, m):
        y = t + 1j * d
        return (phi_b_arr(x - y, (-m) % p.N, p) / phi_b_arr(y, m, p) * np.exp(4j * math.pi * x * y)
                * np.exp(-2j * math.pi * x * x))
    return f


class TestChi41:
    def test_contour_invariance(self):
        p = ModularParam(0.4, 1)
        u = chi_41(0.0, 0.0, p, Contour(-0.05)).value
        v = chi_41(0.0, 0.0, p, Contour(-0.15)).value
        assert rel(u, v) < 1e-8

    def test_dense_trapezoid(self):
        p = ModularParam(0.3, 1)
        d = default_offset_41(0.0, p)
        t = np.linspace(-12, 12, 100_001)
        vals = _chi41_integrand(0.0, d, p)(t, 0)
        dense = np.trapezoid(vals, t) if hasattr(np, "trapezoid") else np.trapz(vals, t)
        assert rel(chi_41(0.0, 0.0, p).value, dense) < 1e-6

    def test_lambda_phase(self):
        p = ModularParam(0.6, 3)
        x = ANPoint(0.15, 1, 3)
        base = chi_41(x, 0.0, p).value
        for lam in (0.2, 0.4):
            v = chi_41(x, lam, p).value
            assert abs(v / base - cmath.exp(4j * math.pi * p.c_b * lam * 0.15)) < 1e-12

    @pytest.mark.parametrize("b", [B_UNIT_5, B_UNIT_6])
    def test_unit_circle_real(self, b):
        v = chi_41(0.0, 0.0, ModularParam(b, 1)).value
        assert abs(v.imag) / abs(v) < 1e-7

    def test_level_one_reduction(self):
        """At N = 1 the A_N pipeline matches a plain line integral of Faddeev's function."""
        p = ModularParam(0.7, 1)
        x, d = 0.2, -0.3

        def f(t):
            y = t + 1j * d
            return phi_b(x - y, p) / phi_b(y, p) * cmath.exp(4j * math.pi * x * y - 2j * math.pi * x * x)
        re = quad(lambda t: f(t).real, -25, 25, epsabs=1e-13, epsrel=1e-12, limit=400)[0]
        im = quad(lambda t: f(t).imag, -25, 25, epsabs=1e-13, epsrel=1e-12, limit=400)[0]
        assert rel(chi_41(x, 0.0, p, Contour(d)).value, re + 1j * im) < 1e-8

    def test_level_three_dense(self):
        p = ModularParam(0.6, 3)
        d = default_offset_41(0.0, p)
        t = np.linspace(-12, 12, 100_001)
        f = _chi41_integrand(0.0, d, p)
        tz = np.trapezoid if hasattr(np, "trapezoid") else np.trapz
        dense = sum(tz(f(t, m), t) for m in range(3)) / math.sqrt(3)
        assert rel(chi_41(0.0, 0.0, p).value, dense) < 1e-6


class TestZ41:
    def test_two_routes(self):
        A = KnotAngleData.figure_eight((1 / 3, 1 / 3), (1 / 3, 1 / 3))
        r = z_41(A, ModularParam(0.5, 1))
        assert r.residual < 1e-5
        assert r.lam == pytest.approx(1.0)

    def test_two_routes_asymmetric(self):
        A = KnotAngleData.figure_eight((0.5, 0.3), (0.45, 0.4))
        r = z_41(A, ModularParam(0.5, 1))
        assert r.residual < 1e-5

    @pytest.mark.parametrize("N", [1, 3])
    def test_modulus_depends_on_lambda_only(self, N):
        p = ModularParam(0.5, N)
        A = KnotAngleData.figure_eight((0.7, 0.2), (0.75, 0.1), N)
        B = KnotAngleData.figure_eight((0.72, 0.16), (0.74, 0.12), N)
        assert A.lam == pytest.approx(0.4 / p.sqrtN) and B.lam == pytest.approx(A.lam)
        za = z_41(A, p, cross_check=False)
        zb = z_41(B, p, cross_check=False)
        assert math.isnan(za.residual)
        assert rel(abs(za.value), abs(zb.value)) < 1e-7

    def test_sigma_modulus(self):
        p = ModularParam(0.5, 1)
        assert rel(abs(sigma_41(0.2, 0.1, p)), abs(sigma_41(0.3, 0.05, p))) < 1e-9
        assert rel(abs(sigma_41(0.2, 0.1, p)), abs(sigma_41(0.1, 0.1, p))) > 1e-3


def _chi52_integrand(d, p):
    def f(t, m):
        z = t + 1j * d
        return np.exp(1j * math.pi * z * z) * cmath.exp(-1j * math.pi * (m * (m + p.N) % (2 * p.N)) / p.N) \
            / phi_b_arr(z, m, p) ** 3
    return f


class TestChi52:
    def test_contour_invariance(self):
        p = ModularParam(0.5, 1)
        lo, hi = chi52_band(0.0, p)
        u = chi_52(0.0, 0.0, p, Contour(lo + 0.3 * (hi - lo))).value
        v = chi_52(0.0, 0.0, p, Contour(lo + 0.7 * (hi - lo))).value
        assert rel(u, v) < 1e-8

    def test_folding(self):
        p = ModularParam(0.6, 1)
        d = default_offset_52(0.0, p)
        f = _chi52_integrand(d, p)
        g = lambda t: complex(f(np.array([t]), 0)[0] + f(np.array([-t]), 0)[0])
        re = quad(lambda t: g(t).real, 0, 25, epsabs=1e-14, epsrel=1e-12, limit=400)[0]
        im = quad(lambda t: g(t).imag, 0, 25, epsabs=1e-14, epsrel=1e-12, limit=400)[0]
        assert rel(chi_52(0.0, 0.0, p).value, re + 1j * im) < 1e-7

    def test_dense_trapezoid(self):
        p = ModularParam(0.3, 1)
        d = default_offset_52(0.0, p)
        t = np.linspace(-12, 12, 100_001)
        tz = np.trapezoid if hasattr(np, "trapezoid") else np.trapz
        dense = tz(_chi52_integrand(d, p)(t, 0), t)
        assert rel(chi_52(0.0, 0.0, p).value, dense) < 1e-6

    def test_lambda_phase(self):
        p = ModularParam(0.6, 1)
        base = chi_52(0.1, 0.0, p).value
        v = chi_52(0.1, 0.3, p).value
        assert abs(v / base - cmath.exp(2j * math.pi * p.c_b * 0.3 * 0.1)) < 1e-12


def test_richardson_exact_on_polynomials():
    ts = [0.4, 0.2, 0.1]
    assert richardson(ts, [3 + 2 * t - t * t for t in ts]) == pytest.approx(3)


class TestHLimits:
    @pytest.mark.parametrize("N", [1, 3])
    def test_figure_eight(self, N):
        p = ModularParam(0.5, N)
        s = p.sqrtN
        r = h_limit_41([0.08 / s, 0.04 / s, 0.02 / s], p)
        assert r.rel_error < 1e-3
        assert r.residuals[0] > r.residuals[1] > r.residuals[2]
        c0 = 0.5 / s
        assert rel(r.rhs, cmath.exp(-1j * math.pi * N / 12) / nu(c0, p) * chi_41(0.0, 0.0, p).value) < 1e-12

    @pytest.mark.parametrize("N", [1, 3])
    def test_five_two_modulus(self, N):
        p = ModularParam(0.5, N)
        s = p.sqrtN
        r = h_limit_52([0.08 / s, 0.04 / s, 0.02 / s], p)
        assert r.modulus_only
        assert r.rel_error < 1e-3

    def test_bad_sequence(self):
        p = ModularParam(0.5, 1)
        with pytest.raises(ValueError):
            h_limit_41([0.02, 0.04], p)
        with pytest.raises(ValueError):
            h_limit_41([0.6, 0.3], p)
