"""Numerical verification of the global integral identities for D_b."""
from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field

import numpy as np

from .an_core import ANPoint, Contour, ModularParam, NonConvergent, haar_integrate
from .charged import ChargeTriple, charged_symmetries_check
from .qdilog import chi_pm, d_b_arr, d_b_poch_arr

TOLERANCES = {
    "closed_form": 1e-10,
    "quadrature": 1e-6,
    "pentagon": 1e-5,
    "pointwise": 1e-8,
}


class PreconditionViolated(ValueError):
    def __init__(self, which: list[str]):
        super().__init__("violated: " + "; ".join(which))
        self.which = which


@dataclass
class IdentityReport:
    name: str
    params: dict
    max_residual: float
    points_checked: int
    passed: bool
    details: dict = field(default_factory=dict)

    def as_dict(self) -> dict:
        return {"name": self.name, "params": self.params, "max_residual": self.max_residual,
                "points_checked": self.points_checked, "passed": self.passed, "details": self.details}


def _rel(u, v) -> float:
    return float(abs(u - v) / max(abs(v), 1e-300))


def _param_record(p: ModularParam) -> dict:
    return {"b": [p.b.real, p.b.imag], "N": p.N}


def _D(x, n, p):
    return complex(d_b_arr(np.atleast_1d(x), n, p)[0])


def _gauss(w, c, N):
    """<(w, c)> continued analytically in w."""
    return cmath.exp(1j * math.pi * w * w) * cmath.exp(-1j * math.pi * (c * (c + N) % (2 * N)) / N)


# ------------------------------------------------------------------ Fourier

def fourier_closed_forms(w: complex, c: int, p: ModularParam) -> dict:
    """Both closed forms for the transforms of D_b and 1/D_b at (w, c)."""
    sq, cb, N = p.sqrtN, p.c_b, p.N
    d_plus = _D(w + cb / sq, c, p)
    d_minus = _D(-w - cb / sq, -c, p)
    g = _gauss(w, c, N)
    return {
        "D_first": cmath.exp(2j * math.pi * w * cb / sq) * p.zeta0 / d_minus,
        "D_second": d_plus / g / p.zeta0,
        "Dinv_first": g * p.zeta0 / d_minus,
        "Dinv_second": d_plus * cmath.exp(-2j * math.pi * w * cb / sq) / p.zeta0,
    }


def _fourier_contour(w: complex, p: ModularParam, inverse: bool) -> float:
    """Offset making the transform of D_b (or 1/D_b) absolutely convergent."""
    gap = abs(p.c_b.imag) / p.sqrtN
    if not (-gap < w.imag < 0):
        raise NonConvergent(f"no pole-free contour gives a convergent transform at w={w}")
    return (w.imag - gap) / 2 if inverse else (-w.imag + gap) / 2


def fourier_numeric(w: complex, c: int, p: ModularParam, inverse: bool = False, rel_tol: float = 1e-10) -> complex:
    d = _fourier_contour(w, p, inverse)
    N = p.N
    sign = -1 if inverse else 1

    def f(x, n):
        return d_b_arr(x, n, p) ** sign * np.exp(2j * math.pi * x * w) \
            * cmath.exp(-2j * math.pi * ((n * c) % N) / N)
    return haar_integrate(f, Contour(offset_d=d, rel_tol=rel_tol), p).value


def check_fourier_formula(w: complex, c: int, p: ModularParam) -> IdentityReport:
    w = complex(w)
    forms = fourier_closed_forms(w, c, p)
    closed = max(_rel(forms["D_first"], forms["D_second"]), _rel(forms["Dinv_first"], forms["Dinv_second"]))
    num_d = fourier_numeric(w, c, p, inverse=False)
    num_i = fourier_numeric(w, c, p, inverse=True)
    quad = max(_rel(num_d, forms["D_first"]), _rel(num_i, forms["Dinv_first"]))
    passed = closed < TOLERANCES["closed_form"] and quad < TOLERANCES["quadrature"]
    return IdentityReport("fourier", {**_param_record(p), "w": [w.real, w.imag], "c": c},
                          max(closed, quad), 1, passed,
                          {"closed_vs_closed": closed, "integral_vs_closed": quad})


# --------------------------------------------------------------- summation

def summation_preconditions(u, v, w, p: ModularParam) -> list[str]:
    s = p.c_b / p.sqrtN
    bad = []
    if p.is_real_b or p.b.imag <= 0:
        bad.append("Im b > 0")
    if not (v + s).imag > 0:
        bad.append("Im(v + c_b/sqrt N) > 0")
    if not (-u + s).imag > 0:
        bad.append("Im(-u + c_b/sqrt N) > 0")
    if not ((v - u).imag < w.imag < 0):
        bad.append("Im(v - u) < Im(w) < 0")
    return bad


def relaxed_summation_preconditions(u, v, w, p: ModularParam) -> list[str]:
    """Cone condition |arg(i z)| < pi - arg b for the three combinations."""
    s = p.c_b / p.sqrtN
    lim = math.pi - cmath.phase(p.b)
    bad = []
    for label, z in (("w", w), ("v-u-w", v - u - w), ("u-v-2c_b/sqrt N", u - v - 2 * s)):
        if not abs(cmath.phase(1j * z)) < lim:
            bad.append(f"|arg(i({label}))| < pi - arg b")
    return bad


def summation_closed_forms(u, v, w, a, b, c, p: ModularParam):
    s = p.c_b / p.sqrtN
    om = p.omega
    first = p.zeta0 * _D(v - u - w + s, b - a - c, p) / (_D(-w - s, -c, p) * _D(v - u + s, b - a, p)) \
        * cmath.exp(2j * math.pi * w * (s - u)) * om ** ((a * c) % p.N)
    second = _D(w + s, c, p) * _D(-v + u - s, a - b, p) / _D(-v + u + w - s, a - b + c, p) \
        * cmath.exp(2j * math.pi * w * (-s - v)) * om ** ((b * c) % p.N) / p.zeta0
    return first, second


def summation_numeric(u, v, w, a, b, c, p: ModularParam, offset: float = 0.0, rel_tol: float = 1e-10) -> complex:
    N = p.N

    def f(x, d):
        return d_b_arr(x + u, a + d, p) / d_b_arr(x + v, b + d, p) * np.exp(2j * math.pi * w * x) \
            * cmath.exp(-2j * math.pi * ((c * d) % N) / N)
    return haar_integrate(f, Contour(offset_d=offset, rel_tol=rel_tol), p).value


def check_summation(u, v, w, a: int, b: int, c: int, p: ModularParam, offset: float | None = None) -> IdentityReport:
    """Integral against both closed forms; offset selects a shifted contour.

    Without an offset the strict real-line conditions are enforced; with one,
    the relaxed cone condition is validated instead.
    """
    u, v, w = complex(u), complex(v), complex(w)
    if offset is None:
        bad = summation_preconditions(u, v, w, p)
    else:
        bad = [x for x in summation_preconditions(u, v, w, p) if x == "Im b > 0"]
        bad += relaxed_summation_preconditions(u, v, w, p)
    if bad:
        raise PreconditionViolated(bad)
    first, second = summation_closed_forms(u, v, w, a, b, c, p)
    closed = _rel(first, second)
    num = summation_numeric(u, v, w, a, b, c, p, offset or 0.0)
    quad = _rel(num, first)
    passed = closed < TOLERANCES["closed_form"] and quad < TOLERANCES["quadrature"]
    return IdentityReport("summation", {**_param_record(p), "u": [u.real, u.imag], "v": [v.real, v.imag],
                                        "w": [w.real, w.imag], "abc": [a, b, c]},
                          max(closed, quad), 1, passed,
                          {"closed_vs_closed": closed, "integral_vs_closed": quad})


# ---------------------------------------------------------------- pentagon

def d_tilde_arr(x, n: int, p: ModularParam):
    """Inverse Fourier transform of D_b in closed form, continued meromorphically.

    Equals zeta0 * psi_{1/sqrt N, 0}(x, n): the charged dilogarithm at the
    degenerate charges (a, c) = (1/sqrt N, 0).
    """
    x = np.asarray(x, dtype=complex)
    sq = p.sqrtN
    return p.zeta0 * np.exp(-2j * math.pi * p.c_b * x / sq) / d_b_arr(x - p.c_b / sq, n, p)


def pentagon_offsets(p: ModularParam) -> tuple[float, float]:
    """(contour offset, boundary-value shift) for the pentagon integral.

    The integrand decays on both ends only while the offset stays below
    Im(c_b)/(3 sqrt N); the arguments are lifted by twice the offset so the
    contour separates the pole of D~(z) at 0 from those of D~(x - z).
    """
    delta = 0.15 * abs(p.c_b.imag) / p.sqrtN
    return delta, 2 * delta


def pentagon_sides(x: ANPoint, y: ANPoint, p: ModularParam, rel_tol: float = 1e-9):
    """(lhs, rhs) of the integral pentagon.

    Real arguments are read as boundary values from the upper half-plane,
    which is where the transform of D_b converges.
    """
    N = p.N
    delta, eta = pentagon_offsets(p)
    X = x.x if x.x.imag > delta else x.x.real + 1j * eta
    Y = y.x if y.x.imag > delta else y.x.real + 1j * eta
    DT = lambda z, k: d_tilde_arr(np.atleast_1d(z), k % N, p)
    lhs = cmath.exp(2j * math.pi * X * Y) * cmath.exp(-2j * math.pi * ((x.n * y.n) % N) / N) \
        * DT(X, x.n)[0] * DT(Y, y.n)[0]

    def f(z, k):
        gz = np.exp(1j * math.pi * z * z) * cmath.exp(-1j * math.pi * (k * (k + N) % (2 * N)) / N)
        return DT(X - z, x.n - k) * DT(z, k) * DT(Y - z, y.n - k) * gz
    rhs = haar_integrate(f, Contour(offset_d=delta, rel_tol=rel_tol), p).value
    return lhs, rhs


def check_integral_pentagon(x: ANPoint, y: ANPoint, p: ModularParam) -> IdentityReport:
    lhs, rhs = pentagon_sides(x, y, p)
    r = _rel(rhs, lhs)
    return IdentityReport("pentagon", {**_param_record(p), "x": [x.x.real, x.x.imag, x.n],
                                       "y": [y.x.real, y.x.imag, y.n], "shift": pentagon_offsets(p)[1]},
                          r, 1, r < TOLERANCES["pentagon"],
                          {"lhs": [lhs.real, lhs.imag], "rhs": [rhs.real, rhs.imag]})


# ---------------------------------------------------------- pointwise checks

E = cmath.exp
PI = math.pi


def _sample_points(p: ModularParam, count: int = 15, imag: float = 0.0):
    xs = np.linspace(-1.2, 1.2, count) + 0.1 + 1j * imag
    return [(complex(x), j % p.N) for j, x in enumerate(xs)]


def _pointwise(name, p, residuals, tol_key="pointwise", tol=None):
    tol = TOLERANCES[tol_key] if tol is None else tol
    r = max(residuals) if residuals else 0.0
    return IdentityReport(name, _param_record(p), float(r), len(residuals), r < tol)


def check_inversion(p: ModularParam, count: int = 15, tol=None) -> IdentityReport:
    res = []
    for x, n in _sample_points(p, count, 0.05):
        lhs = _D(x, n, p) * _D(-x, -n, p)
        rhs = E(1j * PI * x * x) * E(-1j * PI * (n * (n + p.N) % (2 * p.N)) / p.N) / p.zeta_inv
        res.append(_rel(lhs, rhs))
    return _pointwise("inversion", p, res, tol=tol)


def check_unitarity(p: ModularParam, count: int = 15, tol=None) -> IdentityReport:
    """|b| = 1: |D_b(x, n)| = 1; b real: conj D_b(x, n) D_b(x, -n) = 1 (x real)."""
    res = []
    for x, n in _sample_points(p, count):
        d = _D(x, n, p)
        val = d.conjugate() * d if not p.is_real_b else d.conjugate() * _D(x, -n, p)
        res.append(abs(val - 1))
    return _pointwise("unitarity", p, res, tol=tol)


def check_duality(p: ModularParam, count: int = 15, tol=None) -> IdentityReport:
    q = p.dual()
    res = [_rel(_D(x, -n, p), _D(x, n, q)) for x, n in _sample_points(p, count, 0.05)]
    return _pointwise("duality", p, res, tol=tol)


def check_difference(p: ModularParam, count: int = 15, tol=None) -> IdentityReport:
    """Both shift equations, in b and in 1/b, up and down."""
    res = []
    sq, N = p.sqrtN, p.N
    for x, n in _sample_points(p, count, 0.05):
        d0 = _D(x, n, p)
        for s in (1, -1):
            bs = p.b ** s
            chi = chi_pm(s, ANPoint(x, n, N), p)
            up = d0 / (1 + chi * E(-1j * PI * (N - 1) / N) * E(1j * PI * bs * bs / N))
            res.append(_rel(_D(x + 1j * bs / sq, n + s, p), up))
            dn = d0 * (1 + chi * E(1j * PI * (N - 1) / N) * E(-1j * PI * bs * bs / N))
            res.append(_rel(_D(x - 1j * bs / sq, n - s, p), dn))
    return _pointwise("difference", p, res, tol=tol)


def check_representation(p: ModularParam, count: int = 15, tol=None) -> IdentityReport:
    """Integral-based D_b against the Pochhammer product (|b| = 1 only)."""
    res = []
    for x, n in _sample_points(p, count, 0.05):
        a = np.array([x])
        res.append(_rel(complex(d_b_arr(a, n, p)[0]), complex(d_b_poch_arr(a, n, p)[0])))
    return _pointwise("representation", p, res, tol=tol)


def check_reduction(p: ModularParam, count: int = 20, tol=None) -> IdentityReport:
    """At N = 1, D_b(x, 0) is Faddeev's Phi_b(x) itself."""
    from .qdilog import phi_b
    q = ModularParam(p.b, 1)
    xs = np.linspace(-1.5, 1.5, count) + 0.03j
    res = [_rel(_D(complex(x), 0, q), phi_b(complex(x), q)) for x in xs]
    return _pointwise("reduction", q, res, tol_key="closed_form", tol=tol)


def check_charged(p: ModularParam, count: int = 3, tol=None) -> IdentityReport:
    """Charged symmetries: transform identity and the conjugation identity."""
    a = c = 0.3 / p.sqrtN
    ch = ChargeTriple(a, c, p.N)
    grid = [(0.37 * j - 0.4, j % p.N) for j in range(count)]
    out = charged_symmetries_check(ch, p, grid)
    r = max(out["tilde"], out["conj"], out["conj_tilde"])
    tol = TOLERANCES["quadrature"] if tol is None else tol
    return IdentityReport("charged", _param_record(p), float(r), count, r < tol,
                          {k: float(v) for k, v in out.items()})


# ------------------------------------------------------------------- suite

FOURIER_POINTS = [(-0.3j, 0), (0.2 - 0.1j, 1), (-0.25 - 0.05j, 2), (0.1 - 0.2j, 0)]
SUMMATION_POINTS = [(0.2j, -0.2j, -0.1 - 0.05j, (0, 0, 0)),
                    (0.15j, -0.1j, 0.2 - 0.1j, (1, 2, 1)),
                    (0.1 + 0.1j, -0.1 - 0.15j, -0.05 - 0.15j, (2, 0, 1))]
PENTAGON_POINTS = [((0.0, 0), (0.0, 0)), ((0.1, 1), (-0.1, 2)), ((0.3, 0), (-0.2, 1))]


def _fourier_all(p, tol=None):
    reports = []
    for w, c in FOURIER_POINTS:
        gap = abs(p.c_b.imag) / p.sqrtN
        w = complex(w.real, max(w.imag, -0.8 * gap))
        reports.append(check_fourier_formula(w, c % p.N, p))
    return _merge("fourier", p, reports, tol, "quadrature")


def _summation_all(p, tol=None):
    reports = [check_summation(u, v, w, *(k % p.N for k in abc), p) for u, v, w, abc in SUMMATION_POINTS]
    return _merge("summation", p, reports, tol, "quadrature")


def _pentagon_all(p, tol=None):
    reports = [check_integral_pentagon(ANPoint(x, n % p.N, p.N), ANPoint(y, m % p.N, p.N), p)
               for (x, n), (y, m) in PENTAGON_POINTS]
    return _merge("pentagon", p, reports, tol, "pentagon")


def _merge(name, p, reports, tol, key):
    tol = TOLERANCES[key] if tol is None else tol
    r = max((x.max_residual for x in reports), default=0.0)
    passed = all(x.passed for x in reports) if tol == TOLERANCES[key] else r < tol
    return IdentityReport(name, _param_record(p), float(r), len(reports), passed and r < tol,
                          {"cells": [x.details for x in reports]})


def _applies(name: str, p: ModularParam) -> bool:
    if name == "representation":
        return not p.is_real_b
    if name == "summation":
        return p.b.imag > 0
    return True


SUITE = {
    "inversion": check_inversion,
    "unitarity": check_unitarity,
    "difference": check_difference,
    "duality": check_duality,
    "representation": check_representation,
    "reduction": check_reduction,
    "fourier": _fourier_all,
    "summation": _summation_all,
    "pentagon": _pentagon_all,
    "charged": check_charged,
}

DEFAULT_B = (0.7, 1.0, 1.3, E(1j * PI / 5), E(1j * PI / 6))
DEFAULT_N = (1, 3, 5)


def default_grid():
    return [ModularParam(b, N) for b in DEFAULT_B for N in DEFAULT_N]


def _run_cell(name, p, tol):
    try:
        return SUITE[name](p, tol=tol)
    except Exception as exc:  # failures are reported, not raised
        return IdentityReport(name, _param_record(p), float("inf"), 0, False,
                              {"error": f"{type(exc).__name__}: {exc}"})


def run_suite(names=None, grid=None, tolerances: dict | None = None, workers: int = 1) -> list[IdentityReport]:
    """Run the named checks over a parameter grid; inapplicable cells are skipped."""
    names = list(SUITE) if names is None else list(names)
    unknown = [n for n in names if n not in SUITE]
    if unknown:
        raise KeyError(f"unknown identities: {', '.join(unknown)}")
    grid = default_grid() if grid is None else list(grid)
    tolerances = tolerances or {}
    cells = [(n, p, tolerances.get(n)) for n in names for p in grid if _applies(n, p)]
    if workers > 1 and len(cells) > 1:
        from concurrent.futures import ProcessPoolExecutor
        with ProcessPoolExecutor(workers) as ex:
            return list(ex.map(_run_cell, *zip(*cells)))
    return [_run_cell(*c) for c in cells]
