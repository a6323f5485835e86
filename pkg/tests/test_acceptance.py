"""End-to-end acceptance checks, one test per criterion.

Each test prints a single PASS/FAIL line; the lines are repeated in the
terminal summary under "acceptance criteria".  Run alone with

    pytest tests/test_acceptance.py -v
"""
import cmath
import math
import time
from fractions import Fraction as F

import numpy as np

from teichlevel import triangulation as tri
from teichlevel.an_core import ANPoint, Contour, ModularParam
from teichlevel.asymptotics import VOL_41, bb_41, extract_volume, g_41, gamma_N, leading_41, volume_52
from teichlevel.identities import (FOURIER_POINTS, PENTAGON_POINTS, SUMMATION_POINTS, check_fourier_formula,
                                   check_integral_pentagon, check_summation, default_grid, run_suite)
from teichlevel.partition import KnotAngleData, chi_41, chi_52, h_limit_41, h_limit_52, z_41
from teichlevel.qdilog import d_b, d_b_arr, d_b_poch, phi_b, residue_at

U5 = cmath.exp(1j * math.pi / 5)
U6 = cmath.exp(1j * math.pi / 6)
SWEEP_B = (0.30, 0.25, 0.20, 0.15, 0.10)


def _rel(u, v):
    return abs(u - v) / abs(v)


def test_identity_grid(criterion):
    t0 = time.perf_counter()
    reports = run_suite(["inversion", "unitarity", "difference", "duality"], default_grid())
    dt = time.perf_counter() - t0
    worst = max(r.max_residual for r in reports)
    pts = min(r.points_checked for r in reports)
    ok = worst < 1e-8 and all(r.passed for r in reports) and dt < 120 and pts >= 15
    criterion(1, ok, f"identity suite: {len(reports)} cells, >= {pts} points, max residual {worst:.2e}, {dt:.1f}s")


def test_level_one_reduction(criterion):
    worst = 0.0
    for b in (0.8, U5):
        p = ModularParam(b, 1)
        for x in np.linspace(-1.5, 1.5, 20) + 0.03j:
            worst = max(worst, _rel(d_b(ANPoint(complex(x), 0, 1), p), phi_b(complex(x), p)))
    criterion(2, worst < 1e-10, f"D_b(x,0) vs Phi_b(x): 40 points, max residual {worst:.2e}")


def test_representations(criterion):
    worst = 0.0
    for b in (U5, U6):
        for N in (1, 3):
            p = ModularParam(b, N)
            for j, x in enumerate(np.linspace(-1.2, 1.2, 15) + 0.05j):
                a = ANPoint(complex(x), j % N, N)
                worst = max(worst, _rel(d_b(a, p), d_b_poch(a, p)))
    criterion(3, worst < 1e-8, f"integral vs q-Pochhammer representation: max residual {worst:.2e}")


def test_fourier_formula(criterion):
    closed = quad = 0.0
    cells = 0
    for b in (0.8, U5):
        for N in (1, 3):
            p = ModularParam(b, N)
            gap = abs(p.c_b.imag) / p.sqrtN
            for w, c in FOURIER_POINTS:
                r = check_fourier_formula(complex(w.real, max(w.imag, -0.8 * gap)), c % N, p)
                closed = max(closed, r.details["closed_vs_closed"])
                quad = max(quad, r.details["integral_vs_closed"])
            cells += 1
    ok = closed < 1e-12 and quad < 1e-6 and len(FOURIER_POINTS) >= 4
    criterion(4, ok, f"Fourier transform: {cells} cells x {len(FOURIER_POINTS)} points, "
                     f"closed forms {closed:.2e}, integral {quad:.2e}")


def test_summation_formula(criterion):
    closed = quad = 0.0
    for N in (1, 3):
        p = ModularParam(U5, N)
        for u, v, w, abc in SUMMATION_POINTS:
            r = check_summation(u, v, w, *(k % N for k in abc), p)
            closed = max(closed, r.details["closed_vs_closed"])
            quad = max(quad, r.details["integral_vs_closed"])
    ok = closed < 1e-10 and quad < 1e-6 and len(SUMMATION_POINTS) >= 3
    criterion(5, ok, f"summation: {len(SUMMATION_POINTS)} points x N in (1,3), closed forms {closed:.2e}, "
                     f"integral {quad:.2e}")


def test_integral_pentagon(criterion):
    t0 = time.perf_counter()
    worst = 0.0
    for b in (0.8, U6):
        for N in (1, 3):
            p = ModularParam(b, N)
            for (x, n), (y, m) in PENTAGON_POINTS:
                r = check_integral_pentagon(ANPoint(x, n % N, N), ANPoint(y, m % N, N), p)
                worst = max(worst, r.max_residual)
    dt = time.perf_counter() - t0
    ok = worst < 1e-5 and dt < 300 and len(PENTAGON_POINTS) >= 3
    criterion(6, ok, f"integral pentagon: max residual {worst:.2e}, {dt:.1f}s")


def test_residues(criterion):
    worst = 0.0
    for N in (1, 3):
        p = ModularParam(U5, N)
        for lm in ((0, 0), (1, 0), (0, 1)):
            pd = residue_at(*lm, p)
            r = 0.02 / p.sqrtN
            t = 2 * math.pi * np.arange(256) / 256
            z = pd.location.x + r * np.exp(1j * t)
            num = complex(np.mean(d_b_arr(z, pd.location.n, p) * r * np.exp(1j * t)))
            worst = max(worst, _rel(pd.residue, num))
    criterion(7, worst < 1e-6, f"closed-form residues vs contour integral: max residual {worst:.2e}")


def test_triangulation(criterion):
    fig8, f52 = tri.figure_eight(), tri.five_two()
    census = fig8.census == (1, 2, 4, 2) and f52.census[0] == 1 and f52.census[3] == 3
    star = tri.three_star([(F(5, 8), F(1, 4), F(1, 8)), (F(2, 3), F(1, 12), F(1, 4)),
                           (F(17, 24), F(1, 6), F(1, 8))])
    r = tri.pachner_32_full(star, star.shape(), 0)
    pachner = all(tri.weight_pi(r.manifold, new, r.shape) == tri.weight_pi(star, old)
                  for old, new in r.edge_map.items())
    gauge = 0.0
    for t in (0.1, -0.3):
        out = tri.gauge_transform(fig8, tri.LeveledShape(fig8.shape()), {"e0": t})
        gauge = max(gauge, max(abs(u - v) for u, v in zip(tri.weights(fig8), tri.weights(fig8, out.shape))))
    h2 = tri.h2_vanishes(fig8) and tri.h2_vanishes(f52)
    ok = census and pachner and gauge < 1e-12 and h2
    criterion(8, ok, f"census {fig8.census} / {f52.census}, Pachner exact {pachner}, gauge drift {gauge:.1e}, "
                     f"H2 vanishes {h2}")


def test_chi41_engine(criterion):
    p = ModularParam(0.4, 1)
    shift = _rel(chi_41(0.0, 0.0, p, Contour(-0.05)).value, chi_41(0.0, 0.0, p, Contour(-0.15)).value)
    z = z_41(KnotAngleData.figure_eight((1 / 3, 1 / 3), (1 / 3, 1 / 3)), ModularParam(0.5, 1))
    q = ModularParam(0.6, 3)
    x = ANPoint(0.15, 1, 3)
    base = chi_41(x, 0.0, q).value
    phase = abs(chi_41(x, 0.3, q).value / base - cmath.exp(4j * math.pi * q.c_b * 0.3 * 0.15))
    ok = shift < 1e-8 and z.residual < 1e-5 and phase < 1e-12
    criterion(9, ok, f"contour shift {shift:.2e}, z_41 two routes {z.residual:.2e}, lambda phase {phase:.2e}")


def test_volume_41(criterion):
    t0 = time.perf_counter()
    s1 = [(b, abs(chi_41(0.0, 0.0, ModularParam(b, 1)).value)) for b in SWEEP_B]
    s3 = [(b, abs(chi_41(0.0, 0.0, ModularParam(b, 3)).value)) for b in SWEEP_B]
    v1 = extract_volume(s1, 1).volume
    v3 = extract_volume(s3, 3, b4=True).volume
    v3_b2 = extract_volume(s3, 3).volume
    e1, e3 = abs(v1 - VOL_41) / VOL_41, abs(v3 - VOL_41) / VOL_41
    dt = time.perf_counter() - t0
    ok = e1 < 0.01 and e3 < 0.02 and dt < 600
    criterion(10, ok, f"4_1 volume: N=1 {v1:.5f} ({e1:.2%}), N=3 {v3:.5f} ({e3:.2%}, b^2+b^4 fit; "
                      f"b^2 fit {v3_b2:.5f}), {dt:.1f}s")


def test_leading_asymptotic(criterion):
    devs = []
    for N in (1, 3):
        p = ModularParam(0.10, N)
        devs.append(abs(chi_41(0.0, 0.0, p).value / leading_41(p) - 1))
    criterion(11, max(devs) < 0.10, f"chi_41(0)/leading at b=0.1: |ratio-1| = {devs[0]:.3f} (N=1), {devs[1]:.3f} (N=3)")


def test_finite_factor(criterion):
    worst = 0.0
    for N in (1, 3, 5, 7):
        p = ModularParam(1.0, N)
        worst = max(worst, abs(g_41(p) - gamma_N(p) * bb_41(p)))
    exact = g_41(ModularParam(1.0, 1)) == 1
    criterion(12, worst < 1e-10 and exact, f"g_41 = gamma_N * bb_41 for N in (1,3,5,7): max residual {worst:.2e}, "
                                           f"g_41(N=1) == 1 {exact}")


def test_volume_52(criterion):
    saddle = volume_52()
    samples = [(b, abs(chi_52(0.0, 0.0, ModularParam(b, 1)).value)) for b in SWEEP_B]
    fitted = extract_volume(samples, 1).volume
    agree = abs(fitted - saddle) / saddle
    ok = agree < 0.01 and abs(saddle - 2.8281) < 1e-4
    criterion(13, ok, f"5_2 volume: saddle {saddle:.7f}, fitted {fitted:.5f}, relative gap {agree:.2%}")


def test_h_limits(criterion):
    errs = {}
    for N in (1, 3):
        p = ModularParam(0.5, N)
        seq = [v / p.sqrtN for v in (0.08, 0.04, 0.02)]
        errs[("4_1", N)] = h_limit_41(seq, p).rel_error
        errs[("5_2", N)] = h_limit_52(seq, p).rel_error
    ok = max(errs.values()) < 1e-3
    detail = ", ".join(f"{k} N={N} {v:.1e}" for (k, N), v in errs.items())
    criterion(14, ok, f"H-limit extrapolation (5_2 modulus only): {detail}")
