"""Charged quantum dilogarithms and the phase bookkeeping around them."""
from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field

import numpy as np

from .an_core import ANPoint, Contour, ModularParam, gauss_kernel, inverse_fourier
from .qdilog import DilogRegime, d_b_arr

CHARGE_TOL = 1e-12


@dataclass(frozen=True)
class ChargeTriple:
    """Positive charges (a, b, c) summing to 1/sqrt(N); b is derived."""

    a: float
    c: float
    N: int = 1
    b: float = field(default=None)

    def __post_init__(self):
        total = 1 / math.sqrt(self.N)
        derived = total - self.a - self.c
        if self.b is not None and abs(self.a + self.b + self.c - total) > CHARGE_TOL:
            raise ValueError(f"charges do not sum to 1/sqrt(N): {self.a}+{self.b}+{self.c}")
        object.__setattr__(self, "b", derived)
        if min(self.a, self.b, self.c) <= 0:
            raise ValueError(f"charges must be positive, got ({self.a}, {self.b}, {self.c})")


@dataclass(frozen=True)
class EpsilonInvolution:
    """(x, n) -> (x, n) for |b| = 1 and (x, n) -> (x, -n) for b real."""

    regime: DilogRegime

    def sign(self) -> int:
        return 1 if self.regime is DilogRegime.UnitCircleB else -1

    def __call__(self, a: ANPoint) -> ANPoint:
        return ANPoint(a.x, self.sign() * a.n, a.N)


def psi_charged_arr(x, n: int, a: float, c: float, p: ModularParam):
    x = np.asarray(x, dtype=complex)
    return np.exp(-2j * math.pi * p.c_b * a * x) / d_b_arr(x - p.c_b * (a + c), n, p)


def psi_charged(pt: ANPoint, ch: ChargeTriple, p: ModularParam) -> complex:
    """psi_{a,c}(x, n) = e^{-2 pi i c_b a x} / D_b(x - c_b (a + c), n)."""
    return complex(psi_charged_arr(np.atleast_1d(pt.x), pt.n, ch.a, ch.c, p)[0])


def phi_charged(pt: ANPoint, ch: ChargeTriple, p: ModularParam) -> complex:
    """psi with negated residue."""
    return psi_charged(ANPoint(pt.x, -pt.n, p.N), ch, p)


def nu(x: float, p: ModularParam) -> complex:
    sq = p.sqrtN
    return cmath.exp(-1j * math.pi * (p.c_b ** 2 / sq) * (2 * x + 1 / sq) / 6)


def nu_pair(x: float, y: float, p: ModularParam) -> complex:
    return nu(x - y, p) * cmath.exp(1j * math.pi * p.c_b ** 2 * x * (x + y))


def charge_pentagon_constraints(a, c, N: int = 1):
    """Check the five linear relations tying the charges of a pentagon.

    Returns (ok, slack) where slack lists the violation of
    a1 = a0 + a2, a3 = a2 + a4, c1 = c0 + a4, c3 = a0 + c4, c2 = c1 + c3.
    ok also requires every (a_j, c_j) to extend to a positive triple.
    """
    a0, a1, a2, a3, a4 = a
    c0, c1, c2, c3, c4 = c
    slack = np.array([a1 - a0 - a2, a3 - a2 - a4, c1 - c0 - a4, c3 - a0 - c4, c2 - c1 - c3])
    ok = bool(np.all(np.abs(slack) < 1e-12))
    total = 1 / math.sqrt(N)
    ok = ok and all(x > 0 and y > 0 and total - x - y > 0 for x, y in zip(a, c))
    return ok, slack


# ------------------------------------------------------ symmetry identities

def psi_tilde_numeric(xs, ks, ch: ChargeTriple, p: ModularParam, rel_tol: float = 1e-11) -> np.ndarray:
    """Numeric inverse Fourier transform of psi_{a,c} at real points (x_i, k_i)."""
    xs = np.atleast_1d(np.asarray(xs, dtype=float))
    f = lambda y, m: psi_charged_arr(y, m, ch.a, ch.c, p)
    return np.atleast_1d(inverse_fourier(f, p, Contour(rel_tol=rel_tol))(xs, np.asarray(ks)))


def charged_symmetries_check(ch: ChargeTriple, p: ModularParam, grid, epsilon: int | None = None) -> dict:
    """Max relative residual of the three tilde/conjugation identities over grid.

    ``grid`` is a sequence of (x, k) with x real.  The reflected argument is
    -eps(x, k): (-x, k) for real b and (-x, -k) on the unit circle.
    ``epsilon`` overrides the involution sign for negative controls.

    The Gaussian charge factor of the conjugation identity is reported under
    both readings, e^{i pi c_b^2 (a+c)^2} (key ``conj``) and
    e^{pi c_b^2 (a+c)^2} (key ``conj_without_i``).
    """
    eps = EpsilonInvolution(DilogRegime.of(p)).sign() if epsilon is None else epsilon
    a, b, c = ch.a, ch.b, ch.c
    cb2 = p.c_b ** 2
    N = p.N
    psi = lambda x, n, aa, cc: complex(psi_charged_arr(np.atleast_1d(x), n, aa, cc, p)[0])
    gauss = lambda x, n: gauss_kernel(ANPoint(x, n, N), p)
    res = {"tilde": 0.0, "conj": 0.0, "conj_without_i": 0.0, "conj_tilde": 0.0}
    rel = lambda u, v: abs(u - v) / max(abs(v), 1e-300)
    grid = list(grid)
    tildes = psi_tilde_numeric([g[0] for g in grid], [g[1] for g in grid], ch, p)
    for (x, k), t in zip(grid, tildes):
        k_ref = -eps * k
        r1 = psi(x, k, c, b) * gauss(x, k) * cmath.exp(-1j * math.pi * cb2 * a * (a + 2 * c)) * p.zeta0
        base = psi(-x, k_ref, c, a) * gauss(x, k) / p.zeta_inv
        r2 = base * cmath.exp(1j * math.pi * cb2 * (a + c) ** 2)
        r2_no_i = base * cmath.exp(math.pi * cb2 * (a + c) ** 2)
        r3 = psi(-x, k_ref, b, c) * cmath.exp(-2j * math.pi * cb2 * a * b) * p.zeta0
        lhs2 = psi(x, k, a, c).conjugate()
        res["tilde"] = max(res["tilde"], rel(t, r1))
        res["conj"] = max(res["conj"], rel(lhs2, r2))
        res["conj_without_i"] = max(res["conj_without_i"], rel(lhs2, r2_no_i))
        res["conj_tilde"] = max(res["conj_tilde"], rel(t.conjugate(), r3))
    return res
