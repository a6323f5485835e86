import cmath
import math

import pytest

from teichlevel.an_core import ModularParam
from teichlevel.asymptotics import (VOL_41, DegenerateSaddle, IllConditioned, NoConvergence, Potential,
                                    bb_41, extract_volume, find_saddle, g_41, g_52, gamma_N,
                                    leading_41, leading_52, potential_41, potential_52, saddle_41,
                                    saddle_52, volume_52)
from teichlevel.partition import chi_41, chi_52
from teichlevel.qdilog import lobachevsky


def test_volume_constant():
    assert VOL_41 == pytest.approx(2.0298832128193, abs=1e-12)
    assert VOL_41 == 4 * lobachevsky(math.pi / 6)


@pytest.mark.parametrize("make", [potential_41, potential_52])
@pytest.mark.parametrize("N", [1, 3])
def test_derivatives_by_finite_differences(make, N):
    pot = make(ModularParam(1.0, N))
    h = 1e-5
    for x in (0.3 - 0.4j, -0.2 - 0.9j):
        fd1 = (pot.h(x + h) - pot.h(x - h)) / (2 * h)
        fd2 = (pot.dh(x + h) - pot.dh(x - h)) / (2 * h)
        assert abs(fd1 - pot.dh(x)) < 1e-7 * max(1, abs(fd1))
        assert abs(fd2 - pot.d2h(x)) < 1e-7 * max(1, abs(fd2))


@pytest.mark.parametrize("N", [1, 3, 5])
def test_saddle_41(N):
    p = ModularParam(1.0, N)
    sd = saddle_41(p)
    assert sd.x_star == pytest.approx(-2j * math.pi / (3 * math.sqrt(N)), abs=1e-12)
    assert sd.h_at.imag == pytest.approx(-VOL_41, abs=1e-12)


def test_saddle_52():
    sd = saddle_52(ModularParam(1.0, 1))
    u = sd.x_star
    assert abs((1 + cmath.exp(u)) ** 3 - cmath.exp(u)) < 1e-12
    assert volume_52() == pytest.approx(2.8281220883, abs=1e-9)
    assert volume_52(ModularParam(1.0, 3)) == pytest.approx(volume_52(), abs=1e-12)


def test_degenerate_seed():
    with pytest.raises(DegenerateSaddle):
        find_saddle(potential_41(ModularParam(1.0, 1)), 0.0)


def test_no_convergence():
    pot = Potential(lambda x: cmath.exp(x), lambda x: cmath.exp(x), lambda x: cmath.exp(x), "exp")
    with pytest.raises(NoConvergence):
        find_saddle(pot, 0.0, max_iter=5)


class TestFiniteFactors:
    def test_level_one(self):
        p = ModularParam(1.0, 1)
        assert g_41(p) == 1
        assert gamma_N(p) == 1

    @pytest.mark.parametrize("N", [1, 3, 5, 7])
    def test_factorization(self, N):
        p = ModularParam(1.0, N)
        g = g_41(p)
        assert abs(g.imag) < 1e-12
        assert abs(g - gamma_N(p) * bb_41(p)) < 1e-10

    def test_gamma_3(self):
        # |1 - w^-1|^{1/3} |1 - w^-2|^{2/3} with both moduli sqrt 3
        assert gamma_N(ModularParam(1.0, 3)) == pytest.approx(math.sqrt(3))

    def test_g52_level_one(self):
        p = ModularParam(1.0, 1)
        assert g_52(p) == 1


class TestExtractVolume:
    def test_synthetic(self):
        V, C = -2.0, 0.7
        bs = [0.3, 0.25, 0.2, 0.15, 0.1]
        samples = [(b, math.exp((V + C * b * b) / (2 * math.pi * b * b))) for b in bs]
        fit = extract_volume(samples, 1)
        assert fit.volume == pytest.approx(2.0, abs=1e-10)
        assert fit.coeffs[1] == pytest.approx(C, abs=1e-9)
        assert fit.model == "b2"

    def test_b4_and_level(self):
        V, C, D = -2.8, 0.3, -1.1
        bs = [0.3, 0.25, 0.2, 0.15, 0.1]
        samples = [(b, math.exp((V + C * b ** 2 + D * b ** 4) / (2 * math.pi * b * b * 3))) for b in bs]
        fit = extract_volume(samples, 3, b4=True)
        assert fit.volume == pytest.approx(2.8, abs=1e-9)
        assert fit.covariance.shape == (3, 3)

    def test_pure(self):
        samples = [(b, math.exp(-2.0 / (2 * math.pi * b * b))) for b in (0.3, 0.2, 0.1)]
        assert extract_volume(samples, 1, pure=True).volume == pytest.approx(2.0)

    def test_errors(self):
        with pytest.raises(ValueError):
            extract_volume([(0.1, 1.0), (0.2, 1.0)], 1)
        with pytest.raises(ValueError):
            extract_volume([(0.1, 1.0), (0.1, 1.0), (0.2, 1.0)], 1)
        with pytest.raises(ValueError):
            extract_volume([(0.1, -1.0), (0.15, 1.0), (0.2, 1.0)], 1)
        with pytest.raises(IllConditioned):
            extract_volume([(0.1, 1.0), (0.1 + 1e-13, 1.0), (0.1 + 2e-13, 1.0)], 1, b4=True)


@pytest.mark.parametrize("N", [1, 3])
def test_leading_41(N):
    p = ModularParam(0.1, N)
    assert abs(chi_41(0.0, 0.0, p).value / leading_41(p) - 1) < 0.10


def test_leading_52():
    p = ModularParam(0.15, 1)
    assert abs(chi_52(0.0, 0.0, p).value / leading_52(p) - 1) < 0.10
