import cmath
import math

import pytest

from conftest import B_UNIT_5, B_UNIT_6
from teichlevel.an_core import ANPoint, ModularParam, NonConvergent
from teichlevel.identities import (DEFAULT_B, DEFAULT_N, FOURIER_POINTS, PENTAGON_POINTS, SUITE,
                                   SUMMATION_POINTS, TOLERANCES, PreconditionViolated,
                                   check_fourier_formula, check_integral_pentagon, check_summation,
                                   fourier_numeric, run_suite, summation_preconditions)

POINTWISE = ["inversion", "unitarity", "difference", "duality", "representation", "reduction"]


def test_suite_names():
    assert set(POINTWISE) <= set(SUITE)
    assert {"fourier", "summation", "pentagon", "charged"} <= set(SUITE)


def test_pointwise_grid():
    reports = run_suite(POINTWISE)
    assert reports
    for r in reports:
        assert r.passed, r.as_dict()
        assert r.max_residual < 1e-8
    # representation only applies on the unit circle
    reps = [r for r in reports if r.name == "representation"]
    assert len(reps) == 2 * len(DEFAULT_N)


def test_unknown_name():
    with pytest.raises(KeyError):
        run_suite(["nope"])


def test_tightened_tolerance_fails():
    r = run_suite(["inversion"], [ModularParam(0.7, 3)], tolerances={"inversion": 0.0})[0]
    assert not r.passed


def test_tolerance_override_on_integral_check():
    r = run_suite(["fourier"], [ModularParam(0.8, 1)], tolerances={"fourier": 1e-30})[0]
    assert r.name == "fourier" and not r.passed


@pytest.mark.parametrize("b", [0.8, B_UNIT_5])
@pytest.mark.parametrize("N", [1, 3])
def test_fourier(b, N):
    p = ModularParam(b, N)
    gap = abs(p.c_b.imag) / p.sqrtN
    for w, c in FOURIER_POINTS:
        w = complex(w.real, max(w.imag, -0.8 * gap))
        r = check_fourier_formula(w, c % N, p)
        assert r.details["closed_vs_closed"] < 1e-12
        assert r.details["integral_vs_closed"] < 1e-6


def test_fourier_outside_strip():
    with pytest.raises(NonConvergent):
        fourier_numeric(0.1 + 0.2j, 0, ModularParam(0.8, 1))


@pytest.mark.parametrize("N", [1, 3])
@pytest.mark.parametrize("b", [B_UNIT_5, B_UNIT_6])
def test_summation(b, N):
    p = ModularParam(b, N)
    for u, v, w, abc in SUMMATION_POINTS:
        r = check_summation(u, v, w, *(k % N for k in abc), p)
        assert r.details["closed_vs_closed"] < 1e-10
        assert r.details["integral_vs_closed"] < 1e-6


def test_summation_preconditions():
    p = ModularParam(B_UNIT_5, 1)
    assert summation_preconditions(0.2j, -0.2j, -0.1j, p) == []
    with pytest.raises(PreconditionViolated) as e:
        check_summation(0.2j, -0.2j, 0.1j, 0, 0, 0, p)
    assert "Im(v - u) < Im(w) < 0" in e.value.which
    with pytest.raises(PreconditionViolated):
        check_summation(0.2j, -0.2j, -0.1j, 0, 0, 0, ModularParam(0.8, 1))


@pytest.mark.parametrize("b", [0.8, B_UNIT_5])
@pytest.mark.parametrize("N", [1, 3])
def test_pentagon(b, N):
    p = ModularParam(b, N)
    for (x, n), (y, m) in PENTAGON_POINTS:
        r = check_integral_pentagon(ANPoint(x, n % N, N), ANPoint(y, m % N, N), p)
        assert r.max_residual < 1e-5


def test_defaults():
    assert DEFAULT_N == (1, 3, 5)
    assert DEFAULT_B[3] == pytest.approx(cmath.exp(1j * math.pi / 5))
    assert TOLERANCES["pentagon"] == 1e-5
