"""Tetrahedral kernels and the reduced state integrals of 4_1 and 5_2.

Kernels act on four face variables (a0, a1, a2, a3) of A_N; the Dirac factor
of each kernel is returned as an integer linear form and is always eliminated
by hand before any quadrature.  The knot integrals are one-dimensional A_N
contour integrals whose contour is placed inside the pole-free band of the
integrand; for small b it is moved onto the horizontal line through the
saddle point so the quadrature does not fight exponential cancellation.
"""
from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np

from .an_core import (ANPoint, Contour, ModularParam, NonConvergent, QuadratureResult,
                      fourier_kernel_arr, gauss_kernel_arr, haar_integrate)
from .charged import ChargeTriple, EpsilonInvolution, nu, nu_pair, psi_charged_arr
from .qdilog import DilogRegime, d_b_arr

# Im of the unscaled 5_2 critical point u* with (1 + e^u)^3 = e^u
_IM_U52 = -2.1115731639044295


class PoleOnContour(ArithmeticError):
    """The requested contour runs through a singular line of the integrand."""


class StripViolation(ValueError):
    """The requested contour lies outside the pole-free band."""


class Unbalanced(ValueError):
    """Angle data violates the balance condition required by the formula."""


# ------------------------------------------------------------ building blocks

def phi_b_arr(x, n: int, p: ModularParam):
    """phi_b(x, n) = D_b(x, -n)."""
    return d_b_arr(x, (-int(n)) % p.N, p)


def phi_charged_arr(x, n: int, a: float, c: float, p: ModularParam):
    """phi_{a,c}(x, n) = psi_{a,c}(x, -n)."""
    return psi_charged_arr(x, (-int(n)) % p.N, a, c, p)


def phi_tilde_arr(x, n: int, a: float, c: float, p: ModularParam):
    """Inverse Fourier transform of phi_{a,c}, in closed form.

    Uses psi~_{a,c}(x, k) = psi_{c,b}(x, k) <x, k> e^{-pi i c_b^2 a (a + 2c)} zeta_0
    at k = -n, with b = 1/sqrt(N) - a - c.
    """
    b = 1 / p.sqrtN - a - c
    k = (-int(n)) % p.N
    x = np.asarray(x, dtype=complex)
    return (psi_charged_arr(x, k, c, b, p) * gauss_kernel_arr(x, k, p.N)
            * cmath.exp(-1j * math.pi * p.c_b ** 2 * a * (a + 2 * c)) * p.zeta0)


def cgauss_arr(x, n: int, N: int):
    """Analytic continuation of conj<x, n> off the real line."""
    return np.conj(gauss_kernel_arr(np.conj(np.asarray(x, dtype=complex)), n, N))


def _pt(a):
    if isinstance(a, ANPoint):
        return a.x, a.n
    x, n = a
    return x, int(n)


def _bkt(u, v, N):
    return fourier_kernel_arr(u[0], u[1], v[0], v[1], N)


def _sub(u, v, N):
    return (np.asarray(u[0]) - np.asarray(v[0]), (u[1] - v[1]) % N)


@dataclass(frozen=True)
class KernelFactor:
    """<a0, a2| T |a1, a3> = prefactor * delta(sum_k c_k a_k) * smooth(a0, a1, a2, a3)."""

    sign: int
    delta_constraint: tuple
    prefactor: complex
    smooth_factor: Callable = field(repr=False)

    def __call__(self, a0, a1, a2, a3):
        return self.prefactor * self.smooth_factor(a0, a1, a2, a3)

    def delta_argument(self, a0, a1, a2, a3, N: int):
        pts = [_pt(a) for a in (a0, a1, a2, a3)]
        x = sum(c * np.asarray(q[0]) for c, q in zip(self.delta_constraint, pts))
        n = sum(c * q[1] for c, q in zip(self.delta_constraint, pts)) % N
        return x, n


def tetra_kernel(T, ch: ChargeTriple, p: ModularParam, conjugate_form: bool = False,
                 epsilon: int | None = None) -> KernelFactor:
    """Integral kernel of the charged tetrahedral operator (sign +1) or its inverse (-1).

    ``T`` is a sign or anything with a ``sign`` attribute.  Points are ANPoint
    or (x, n) pairs with x possibly an array.  For the negative kernel,
    ``conjugate_form`` writes phi_{b,c}(z) through conj(phi~_{a,c})(-z) with
    the residue moved by the involution; ``epsilon`` overrides its sign.
    """
    sign = int(getattr(T, "sign", T))
    if sign not in (1, -1):
        raise ValueError("sign must be +1 or -1")
    a, b, c = ch.a, ch.b, ch.c
    N = p.N
    if sign > 0:
        pref = nu(a - c, p) * cmath.exp(1j * math.pi * p.c_b ** 2 * a * (a + c))

        def smooth(a0, a1, a2, a3):
            a0, a2, a3 = _pt(a0), _pt(a2), _pt(a3)
            z = _sub(a3, a2, N)
            return _bkt(z, a0, N) * cgauss_arr(z[0], z[1], N) * phi_tilde_arr(z[0], z[1], a, c, p)

        return KernelFactor(1, (1, -1, 1, 0), pref, smooth)

    pref = nu(b - c, p) * cmath.exp(1j * math.pi * p.c_b ** 2 * b * (b + c)) * cmath.exp(-1j * math.pi * N / 12)
    eps = EpsilonInvolution(DilogRegime.of(p)).sign() if epsilon is None else int(epsilon)

    def phi_bc(x, n):
        if not conjugate_form:
            return phi_charged_arr(x, n, b, c, p)
        # phi_{b,c}(w, n) = e^{2 pi i c_b^2 a b} / zeta_0 * conj(phi~_{a,c})(-w, -eps n)
        xs = np.asarray(x, dtype=complex)
        k = (-eps * n) % N
        v = np.conj(phi_tilde_arr(np.conj(-xs), k, a, c, p))
        return v * cmath.exp(2j * math.pi * p.c_b ** 2 * a * b) / p.zeta0

    def smooth(a0, a1, a2, a3):
        a1, a2, a3 = _pt(a1), _pt(a2), _pt(a3)
        z = _sub(a3, a2, N)
        return _bkt(z, a1, N) * gauss_kernel_arr(z[0], z[1], N) * phi_bc(z[0], z[1])

    return KernelFactor(-1, (-1, 1, 0, 1), pref, smooth)


# ----------------------------------------------------------- angle data

@dataclass(frozen=True)
class KnotAngleData:
    """Charges of the tetrahedra of a knot triangulation, in A_N units (sum 1/sqrt N).

    4_1: (T+, T-) with signs (+1, -1); 5_2: (T1, T2, T3), all positive.
    """

    knot: str
    charges: tuple
    signs: tuple

    def __post_init__(self):
        want = {"4_1": 2, "5_2": 3}
        if self.knot not in want:
            raise ValueError(f"unknown knot {self.knot!r}")
        if len(self.charges) != want[self.knot] or len(self.signs) != want[self.knot]:
            raise ValueError(f"{self.knot} needs {want[self.knot]} tetrahedra")

    @classmethod
    def figure_eight(cls, plus: tuple[float, float], minus: tuple[float, float], N: int = 1):
        """plus/minus are (a, c) pairs in units of 1/sqrt N (i.e. angle / pi)."""
        s = math.sqrt(N)
        return cls("4_1", (ChargeTriple(plus[0] / s, plus[1] / s, N),
                           ChargeTriple(minus[0] / s, minus[1] / s, N)), (1, -1))

    @classmethod
    def five_two(cls, pairs: Sequence[tuple[float, float]], N: int = 1):
        s = math.sqrt(N)
        return cls("5_2", tuple(ChargeTriple(a / s, c / s, N) for a, c in pairs), (1, 1, 1))

    @property
    def lam(self) -> float:
        ch = self.charges
        if self.knot == "4_1":
            return 2 * ch[0].b + ch[0].c
        return -ch[0].c + ch[1].b - ch[1].c + ch[2].a

    def balance_residual(self) -> float:
        ch = self.charges
        if self.knot == "4_1":
            return abs(2 * ch[0].b + ch[0].c - 2 * ch[1].b - ch[1].c)
        return max(abs(2 * ch[2].a - ch[0].a - ch[1].c), abs(ch[2].b - ch[0].c - ch[1].b))

    def is_balanced(self, tol: float = 1e-12) -> bool:
        return self.balance_residual() <= tol


# -------------------------------------------------------------- contours

def _gap(p: ModularParam) -> float:
    return abs(p.c_b.imag) / p.sqrtN


def chi41_band(x: complex, p: ModularParam) -> tuple[float, float]:
    """Open interval of Im y where the 4_1 integrand is regular and decays."""
    g, xi = _gap(p), complex(x).imag
    return max(-g, xi - g), min(0.0, xi)


def chi52_band(x: complex, p: ModularParam) -> tuple[float, float]:
    g, xi = _gap(p), abs(complex(x).imag)
    return -g + xi, 0.0


def _clip(target: float, lo: float, hi: float) -> float:
    w = hi - lo
    return min(max(target, lo + 0.1 * w), hi - 0.1 * w)


def _saddle_scale(p: ModularParam) -> float | None:
    if not p.is_real_b:
        return None
    b = p.b.real
    return max(b, 1 / b) / p.sqrtN


def default_offset_41(x: complex, p: ModularParam) -> float:
    """Line through the saddle -i/(3 b sqrt N) for real b, band midpoint otherwise."""
    lo, hi = chi41_band(x, p)
    if lo >= hi:
        raise StripViolation(f"no pole-free band for x = {x}")
    s = _saddle_scale(p)
    return _clip(-s / 3 if s else 0.5 * (lo + hi), lo, hi)


def default_offset_52(x: complex, p: ModularParam) -> float:
    lo, hi = chi52_band(x, p)
    if lo >= hi:
        raise StripViolation(f"no pole-free band for x = {x}")
    s = _saddle_scale(p)
    return _clip(_IM_U52 / (2 * math.pi) * s if s else 0.5 * (lo + hi), lo, hi)


def _resolve(contour: Contour | None, band, default: float) -> Contour:
    lo, hi = band
    if contour is None:
        return Contour(default, rel_tol=1e-10)
    d = contour.offset_d
    if abs(d - lo) < 1e-12 or abs(d - hi) < 1e-12:
        raise PoleOnContour(f"offset {d} sits on the boundary line of the band ({lo}, {hi})")
    if not lo < d < hi:
        raise StripViolation(f"offset {d} outside the pole-free band ({lo}, {hi})")
    return contour


def _as_point(x, p: ModularParam) -> tuple[complex, int]:
    if isinstance(x, ANPoint):
        return complex(x.x), x.n % p.N
    return complex(x), 0


# -------------------------------------------------------------- 4_1

def _chi41_f(x: complex, n: int, p: ModularParam):
    N = p.N
    pre = cgauss_arr(x, n, N) ** 2

    def f(y, m):
        return (phi_b_arr(x - y, (n - m) % N, p) / phi_b_arr(y, m, p)
                * fourier_kernel_arr(x, n, y, m, N) ** 2 * pre)
    return f


def chi_41(x, lam: float, p: ModularParam, contour: Contour | None = None) -> QuadratureResult:
    """chi_41(x, lam) = e^{4 pi i c_b lam x} * int phi_b(x-y)/phi_b(y) <x,y>^2 conj<x>^2 dy."""
    xv, n = _as_point(x, p)
    c = _resolve(contour, chi41_band(xv, p), default_offset_41(xv, p) if contour is None else 0.0)
    r = haar_integrate(_chi41_f(xv, n, p), c, p)
    ph = cmath.exp(4j * math.pi * p.c_b * lam * xv)
    return QuadratureResult(r.value * ph, r.err_estimate * abs(ph), r.nodes_used)


def sigma_41(c: float, b: float, p: ModularParam, rel_tol: float = 1e-10) -> complex:
    """sigma_{c,b} = nu_{c,b} int phi_{c,b}(z) <z, z> dz over the real A_N line."""
    N = p.N
    g = lambda t: sum(phi_charged_arr(t, m, c, b, p) * fourier_kernel_arr(t, m, t, m, N)
                      for m in range(N))[:, None]
    return nu_pair(c, b, p) * complex(_trapezoid(g, rel_tol)[0][0]) / p.sqrtN


def _nu_prime(c: float, b: float, p: ModularParam) -> complex:
    return nu_pair(c, b, p) * cmath.exp(2j * math.pi * p.c_b ** 2 * b * (b + c))


@dataclass(frozen=True)
class Z41Result:
    value: complex
    direct: complex
    residual: float
    lam: float


def _trapezoid(g, rel_tol: float, h: float = 0.25, L: float = 8.0, max_pts: int = 1 << 15):
    """Trapezoid rule over the real line for vector-valued g(t) -> (len(t), k).

    The window doubles until the end values are negligible; then, since the
    error of an integrand analytic in a strip falls like e^{-c/h}, the step
    is halved until successive sums agree.  Returns (value, err).
    """
    while True:
        t = np.arange(-L, L + 0.5 * h, h)
        v = np.asarray(g(t))
        S = h * v.sum(axis=0)
        scale = float(np.max(np.abs(S)))
        if not np.isfinite(scale) or len(t) > max_pts:
            raise NonConvergent("integrand does not decay inside the node budget")
        if float(np.max(np.abs(v[[0, -1]]))) <= 0.01 * rel_tol * scale:
            break
        L *= 2
    hh, used = h, len(t)
    while True:
        mids = np.arange(-L + 0.5 * hh, L, hh)
        S2 = 0.5 * S + 0.5 * hh * np.asarray(g(mids)).sum(axis=0)
        err = float(np.max(np.abs(S2 - S)))
        S, hh, used = S2, 0.5 * hh, used + len(mids)
        if err <= rel_tol * float(np.max(np.abs(S))):
            return S, err
        if used > max_pts:
            raise NonConvergent("trapezoid rule exhausted its node budget")


def _chi41_columns(xs: np.ndarray, n: int, p: ModularParam, weight: np.ndarray, rel_tol: float):
    """weight_i * chi_41(xs_i, n) for a batch of complex xs, one contour per column.

    Each column's contour is pushed toward the side of its band where the
    Fourier factor is smallest, keeping the integrand comparable to its value.
    """
    N = p.N
    lo = np.maximum(-_gap(p), xs.imag - _gap(p))
    hi = np.minimum(0.0, xs.imag)
    frac = 0.5 + 0.35 * np.tanh(xs.real)
    d = lo + (hi - lo) * frac
    pre = cgauss_arr(xs, n, N) ** 2 * weight
    total = np.zeros(xs.shape, dtype=complex)
    for m in range(N):
        def g(t, m=m):
            y = t.real[:, None] + 1j * d[None, :]
            X = np.broadcast_to(xs[None, :], y.shape)
            num = phi_b_arr((X - y).ravel(), (n - m) % N, p).reshape(y.shape)
            den = phi_b_arr(y.ravel(), m, p).reshape(y.shape)
            return num / den * fourier_kernel_arr(X, n, y, m, N) ** 2 * pre[None, :]
        v, _ = _trapezoid(g, rel_tol)
        total = total + v
    return total / p.sqrtN


def z_41(angles: KnotAngleData, p: ModularParam, rel_tol: float = 1e-8,
         cross_check: bool = True) -> Z41Result:
    """Figure-eight state integral as sigma_+ conj(sigma_-), cross-checked by the
    two-dimensional form nu'_+ conj(nu'_-) int int phi_b(x-y)/phi_b(y)
    e^{2 pi i c_b lam x} <x,y>^2 conj<x>^2.

    The x contour sits at Im x = Im(c_b) (b_- + c_- - b_+ - c_+), the image of
    the real lines of the two sigma integrals under the shift z -> z - c_b(b+c).
    With ``cross_check=False`` the direct route is skipped (direct and
    residual are nan).
    """
    if angles.knot != "4_1":
        raise ValueError("z_41 needs figure-eight angle data")
    if not angles.is_balanced():
        raise Unbalanced(f"2b+ + c+ != 2b- + c- (residual {angles.balance_residual():.3g})")
    tp, tm = angles.charges
    lam = angles.lam
    fact = sigma_41(tp.c, tp.b, p) * np.conj(sigma_41(tm.c, tm.b, p))
    if not cross_check:
        return Z41Result(complex(fact), complex(math.nan, math.nan), math.nan, lam)

    dx = p.c_b.imag * (tm.b + tm.c - tp.b - tp.c)
    k = 2j * math.pi * p.c_b * lam
    tot, err = 0j, 0.0
    for n in range(p.N):
        def G(t, n=n):
            xs = t.real + 1j * dx
            return _chi41_columns(xs, n, p, np.exp(k * xs), 0.1 * rel_tol)[:, None]
        v, e = _trapezoid(G, rel_tol)
        v = v[0]
        tot += v
        err += e
    direct = _nu_prime(tp.c, tp.b, p) * np.conj(_nu_prime(tm.c, tm.b, p)) * tot / p.sqrtN
    if not np.isfinite(direct):
        raise NonConvergent("direct evaluation produced a non-finite value")
    res = abs(direct - fact) / max(abs(fact), 1e-300)
    return Z41Result(complex(fact), complex(direct), float(res), lam)


# -------------------------------------------------------------- 5_2

def _chi52_f(x: complex, n: int, p: ModularParam):
    N = p.N
    pre = cgauss_arr(x, n, N)

    def f(z, m):
        # divide one factor at a time: the product overflows far out on the line
        r = pre * gauss_kernel_arr(z, m, N) / phi_b_arr(z + x, (m + n) % N, p)
        r = r / phi_b_arr(z, m, p)
        return r / phi_b_arr(z - x, (m - n) % N, p)
    return f


def chi_52(x, lam: float, p: ModularParam, contour: Contour | None = None) -> QuadratureResult:
    """chi_52(x, lam) = e^{2 pi i c_b lam x} int conj<x> <z> / (phi_b(z+x) phi_b(z) phi_b(z-x)) dz."""
    xv, n = _as_point(x, p)
    c = _resolve(contour, chi52_band(xv, p), default_offset_52(xv, p) if contour is None else 0.0)
    r = haar_integrate(_chi52_f(xv, n, p), c, p)
    ph = cmath.exp(2j * math.pi * p.c_b * lam * xv)
    return QuadratureResult(r.value * ph, r.err_estimate * abs(ph), r.nodes_used)


# --------------------------------------------------------- H-triangulations

def richardson(ts: Sequence[float], values: Sequence[complex]) -> complex:
    """Polynomial (Neville) extrapolation of values(t) to t = 0."""
    ts = [float(t) for t in ts]
    P = [complex(v) for v in values]
    m = len(ts)
    for k in range(1, m):
        for i in range(m - 1, k - 1, -1):
            P[i] = (ts[i] * P[i - 1] - ts[i - k] * P[i]) / (ts[i] - ts[i - k])
    return P[-1]


@dataclass(frozen=True)
class HLimitResult:
    a0: tuple
    values: tuple
    extrapolated: complex
    rhs: complex
    rel_error: float
    residuals: tuple
    modulus_only: bool


def _check_seq(a0_sequence) -> list[float]:
    seq = [float(t) for t in a0_sequence]
    if len(seq) < 2 or any(t <= 0 for t in seq) or any(u <= v for u, v in zip(seq, seq[1:])):
        raise ValueError("a0_sequence must be positive and strictly decreasing")
    return seq


def _folded_factor(t: float, c0: float, sign: int, p: ModularParam) -> complex:
    """Kernel of the folded tetrahedron with both free faces at 0, times the regulator.

    The self-glued pair contributes a Fourier integral that forces the
    remaining two faces to 0; what is left is the kernel at the origin.
    """
    ch = ChargeTriple(t, c0, p.N)
    K = tetra_kernel(sign, ch, p)
    o = (np.zeros(1), 0)
    reg = phi_b_arr(np.array([p.c_b * t - p.c_b / p.sqrtN]), 0, p)[0]
    return complex(K(o, o, o, o)[0]) * reg


def h_limit_41_lhs(t: float, base: tuple[float, float], c0: float, p: ModularParam,
                   rel_tol: float = 1e-11) -> complex:
    """phi_b(c_b t - c_b/sqrt N) Z(X_t) for the figure-eight H-triangulation.

    ``base`` = (a, c) in units of 1/sqrt N.  Every non-knot edge stays
    balanced for T- = (a, b, c) and T+ = (a + t, b - t, c).  Contracting the
    six glued faces leaves one A_N integral over the face u shared by T+
    (faces 0, 2 = u, -u) and T- (faces 2, 0).
    """
    s = p.sqrtN
    a, c = (v / s for v in base)
    tp = ChargeTriple(a + t, c, p.N)
    tm = ChargeTriple(a, c, p.N)
    Kp, Km = tetra_kernel(1, tp, p), tetra_kernel(-1, tm, p)
    zero = lambda u: (np.zeros_like(u), 0)

    def f(u, n):
        U, V = (u, n), (-u, (-n) % p.N)
        return Kp(U, zero(u), V, zero(u)) * Km(zero(u), V, zero(u), U)
    J = haar_integrate(f, Contour(0.0, rel_tol=rel_tol), p).value
    return _folded_factor(t, c0, 1, p) * J


def h_limit_41(a0_sequence, p: ModularParam, base=(1 / 3, 1 / 3), c0: float | None = None,
               rhs: complex | None = None) -> HLimitResult:
    """Extrapolate phi_b(c_b a0 - c_b/sqrt N) Z to a0 = 0 and compare with
    e^{-pi i N/12} chi_41(0) / nu(c0)."""
    seq = _check_seq(a0_sequence)
    c0 = 0.5 / p.sqrtN if c0 is None else c0
    if c0 + seq[0] >= 1 / p.sqrtN:
        raise ValueError("c0 + a0 must stay below 1/sqrt N")
    vals = [h_limit_41_lhs(t, base, c0, p) for t in seq]
    ext = richardson(seq, vals)
    if rhs is None:
        rhs = cmath.exp(-1j * math.pi * p.N / 12) / nu(c0, p) * chi_41(0.0, 0.0, p).value
    res = tuple(float(abs(v - rhs) / abs(rhs)) for v in vals)
    return HLimitResult(tuple(seq), tuple(vals), ext, rhs, abs(ext - rhs) / abs(rhs), res, False)


def _five_two_h_charges(t: float, base, p: ModularParam):
    """(T1, T2, T3) for knot angle t; base = (a1, c1, b2) in units of 1/sqrt N.

    Non-knot edges stay balanced with a2 = 1 - b2 - a1, c2 = a1,
    T3 = (a1 + t, c1 + b2 - t, 1 - a1 - c1 - b2).
    """
    s = p.sqrtN
    a1, c1, b2 = (v / s for v in base)
    c3 = 1 / s - a1 - c1 - b2
    return (ChargeTriple(a1, c1, p.N), ChargeTriple(1 / s - b2 - a1, a1, p.N),
            ChargeTriple(a1 + t, c3, p.N))


def h_limit_52_lhs(t: float, base, c0: float, p: ModularParam, rel_tol: float = 1e-11) -> complex:
    """phi_b(c_b t - c_b/sqrt N) Z(X_t) for the 5_2 H-triangulation.

    With the folded tetrahedron pinning two faces to 0 the remaining
    contraction has two free faces (w, v); the v integral is a Fourier
    transform of phi~_{a2,c2} conj<.>, done in closed form, leaving
    int conj<u>^2 phi~_{a1,c1}(u) phi~_{c2,b2}(u) phi~_{a3,c3}(u) du.
    """
    T1, T2, T3 = _five_two_h_charges(t, base, p)
    N = p.N
    C = (nu_pair(T1.a, T1.c, p) * nu_pair(T3.a, T3.c, p) * nu_pair(T2.c, T2.b, p)
         * cmath.exp(-1j * math.pi * N / 12))

    def f(u, n):
        return (cgauss_arr(u, n, N) ** 2 * phi_tilde_arr(u, n, T1.a, T1.c, p)
                * phi_tilde_arr(u, n, T2.c, T2.b, p) * phi_tilde_arr(u, n, T3.a, T3.c, p))
    I = haar_integrate(f, Contour(0.0, rel_tol=rel_tol), p).value
    return _folded_factor(t, c0, -1, p) * C * I


def h_limit_52(a0_sequence, p: ModularParam, base=(0.3, 0.3, 0.3), c0: float | None = None) -> HLimitResult:
    """Modulus-level limit: |phi_b(c_b a0 - c_b/sqrt N) Z| -> |chi_52(c_b(a1 - a3))| as a0 -> 0."""
    seq = _check_seq(a0_sequence)
    c0 = 0.5 / p.sqrtN if c0 is None else c0
    if c0 + seq[0] >= 1 / p.sqrtN:
        raise ValueError("c0 + a0 must stay below 1/sqrt N")
    mods = [abs(h_limit_52_lhs(t, base, c0, p)) for t in seq]
    ext = richardson(seq, mods)
    rhs = abs(chi_52(0.0, 0.0, p).value)
    res = tuple(float(abs(v - rhs) / rhs) for v in mods)
    return HLimitResult(tuple(seq), tuple(mods), complex(ext), complex(rhs), abs(ext - rhs) / rhs, res, True)
