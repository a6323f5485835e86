"""Semiclassical (b -> 0) analysis of the knot integrals.

Both integrals are written in the rescaled variable y = 2 pi b z, where each
level-N dilogarithm behaves like exp(Li2(-e^{sqrt(N) y}) / (2 pi i b^2 N))
times a cyclic factor.  The exponent collected over the integrand is the
potential; its nondegenerate critical point controls the leading term.
"""
from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

from .an_core import ModularParam
from .qdilog import cyclic_phi, li2, lobachevsky

VOL_41 = 4 * lobachevsky(math.pi / 6)
# unscaled critical point of the 5_2 potential: (1 + e^u)^3 = e^u
_U52_SEED = -0.42 - 2.11j


class NoConvergence(RuntimeError):
    """Newton iteration did not settle within the iteration budget."""


class DegenerateSaddle(ArithmeticError):
    """The second derivative vanishes at (or near) the iterate."""


class IllConditioned(ValueError):
    """The least-squares design matrix is (numerically) rank deficient."""


@dataclass(frozen=True)
class Potential:
    h: Callable[[complex], complex]
    dh: Callable[[complex], complex]
    d2h: Callable[[complex], complex]
    name: str


@dataclass(frozen=True)
class SaddleResult:
    x_star: complex
    h_at: complex
    d2h_at: complex
    newton_iters: int


def potential_41(p: ModularParam) -> Potential:
    """h(x) = Li2(-e^{-sqrt(N) x}) - Li2(-e^{sqrt(N) x})."""
    s = p.sqrtN

    def h(x):
        return li2(-cmath.exp(-s * x)) - li2(-cmath.exp(s * x))

    def dh(x):
        return s * (cmath.log(1 + cmath.exp(-s * x)) + cmath.log(1 + cmath.exp(s * x)))

    def d2h(x):
        e = cmath.exp(s * x)
        return s * s * (e / (1 + e) - 1 / (1 + e))

    return Potential(h, dh, d2h, "4_1")


def potential_52(p: ModularParam) -> Potential:
    """V(y) = -3 Li2(-e^u) - u^2/2 with u = sqrt(N) y.

    The three dilogarithms in the denominator each contribute -Li2(-e^u) and
    the Gaussian e^{pi i z^2} contributes -u^2/2 once z = y / (2 pi b) and
    everything is measured in units of 1/(2 pi i b^2 N).
    """
    s = p.sqrtN

    def h(y):
        u = s * y
        return -3 * li2(-cmath.exp(u)) - u * u / 2

    def dh(y):
        u = s * y
        return s * (3 * cmath.log(1 + cmath.exp(u)) - u)

    def d2h(y):
        e = cmath.exp(s * y)
        return s * s * (3 * e / (1 + e) - 1)

    return Potential(h, dh, d2h, "5_2")


def find_saddle(pot: Potential, seed: complex, max_iter: int = 50, tol: float = 1e-13) -> SaddleResult:
    """Newton iteration on h' with the analytic h''."""
    x = complex(seed)
    for it in range(1, max_iter + 1):
        g, H = pot.dh(x), pot.d2h(x)
        if abs(H) < 1e-10:
            raise DegenerateSaddle(f"|h''| = {abs(H):.3g} at x = {x}")
        step = g / H
        x -= step
        if not (math.isfinite(x.real) and math.isfinite(x.imag)):
            break
        if abs(step) <= 1e-15 * max(1.0, abs(x)) or abs(pot.dh(x)) < tol:
            H = pot.d2h(x)
            if abs(H) < 1e-10:
                raise DegenerateSaddle(f"|h''| = {abs(H):.3g} at x = {x}")
            return SaddleResult(x, pot.h(x), H, it)
    raise NoConvergence(f"Newton did not converge from seed {seed}")


def saddle_41(p: ModularParam) -> SaddleResult:
    """The critical point -2 pi i / (3 sqrt N) reached from the integration contour."""
    return find_saddle(potential_41(p), (-0.5 - 2.0j) / p.sqrtN)


def saddle_52(p: ModularParam) -> SaddleResult:
    return find_saddle(potential_52(p), _U52_SEED / p.sqrtN)


def volume_52(p: ModularParam | None = None) -> float:
    """-Im V at the saddle; independent of N."""
    return -saddle_52(p or ModularParam(1.0, 1)).h_at.imag


# ------------------------------------------------------ finite-level factors

def _x0(p: ModularParam) -> complex:
    return -2j * math.pi / (3 * p.sqrtN)


def g_41(p: ModularParam) -> complex:
    """(1/sqrt N) sum_k phi_{-x}(k) conj(phi)_x(k) at x = -2 pi i/(3 sqrt N).

    The conjugated factor is the analytic continuation of conj(phi_x) from
    real x, i.e. conj(phi_{conj x}); at this point every term is |phi|^2.
    """
    x = _x0(p)
    tot = sum(cyclic_phi(-x, k, p) * cyclic_phi(x.conjugate(), k, p).conjugate() for k in range(p.N))
    return tot / p.sqrtN


def gamma_N(p: ModularParam) -> float:
    N = p.N
    return math.prod(abs(1 - cmath.exp(-2j * math.pi * j / N)) ** (j / N) for j in range(1, N))


def bb_41(p: ModularParam) -> float:
    """Finite invariant g_41 / gamma_N, from its explicit product/sum form.

    sqrt(N) g_41 = |prod_j (1 - r w^-j)^{j/N}|^2 * sum_k prod_{j<=k} |1 - r w^j|^-2
    with r = e^{-pi i/(3N)} and w = e^{2 pi i/N}.
    """
    N = p.N
    r = cmath.exp(-1j * math.pi / (3 * N))
    w = cmath.exp(2j * math.pi / N)
    head = math.prod(abs(1 - r * w ** (-j)) ** (2 * j / N) for j in range(1, N))
    tail = sum(math.prod(abs(1 - r * w ** j) ** -2 for j in range(1, k + 1)) for k in range(N))
    return head * tail / (p.sqrtN * gamma_N(p))


def g_52(p: ModularParam, y: complex | None = None) -> complex:
    """Cyclic factor of the 5_2 integrand: (1/sqrt N) sum_n <n> / phi_y(n)^3."""
    N = p.N
    y = saddle_52(p).x_star if y is None else y
    tot = 0j
    for n in range(N):
        ph = cmath.exp(-1j * math.pi * (n * (n + N) % (2 * N)) / N)
        tot += ph / cyclic_phi(y, n, p) ** 3
    return tot / p.sqrtN


def leading_41(p: ModularParam) -> complex:
    """e^{h(x0)/(2 pi i b^2 N)} g_41 / sqrt(i h''(x0) / N)."""
    pot = potential_41(p)
    x0 = _x0(p)
    kappa = 2j * math.pi * p.b ** 2 * p.N
    return cmath.exp(pot.h(x0) / kappa) * g_41(p) / cmath.sqrt(1j * pot.d2h(x0) / p.N)


def leading_52(p: ModularParam) -> complex:
    """Steepest-descent value of the 5_2 integral at x = 0."""
    sd = saddle_52(p)
    kappa = 2j * math.pi * p.b ** 2 * p.N
    return cmath.exp(sd.h_at / kappa) * g_52(p, sd.x_star) / cmath.sqrt(1j * sd.d2h_at / p.N)


# ------------------------------------------------------------ volume fits

@dataclass(frozen=True)
class VolumeFit:
    volume: float
    coeffs: tuple
    covariance: np.ndarray
    residual: float
    model: str


def extract_volume(samples: Sequence[tuple[float, float]], N: int, b4: bool = False,
                   pure: bool = False) -> VolumeFit:
    """Fit 2 pi b^2 N log|J| = V + C b^2 (+ C2 b^4) and return -V.

    ``pure`` drops every correction term (plain average of the scaled logs).
    """
    if len(samples) < 3:
        raise ValueError("need at least 3 samples")
    bs = np.array([float(s[0]) for s in samples])
    mods = np.array([float(s[1]) for s in samples])
    if len(set(bs.tolist())) != len(bs):
        raise ValueError("b values must be distinct")
    if np.any(mods <= 0) or np.any(bs <= 0):
        raise ValueError("moduli and b must be positive")
    y = 2 * math.pi * bs ** 2 * N * np.log(mods)
    cols = [np.ones_like(bs)]
    if not pure:
        cols.append(bs ** 2)
        if b4:
            cols.append(bs ** 4)
    A = np.column_stack(cols)
    if A.shape[1] > A.shape[0]:
        raise IllConditioned("more fit terms than samples")
    sv = np.linalg.svd(A / np.linalg.norm(A, axis=0), compute_uv=False)
    if sv[-1] < 1e-10 * sv[0]:
        raise IllConditioned(f"design condition number {sv[0] / max(sv[-1], 1e-300):.3g}")
    coef, _, _, _ = np.linalg.lstsq(A, y, rcond=None)
    res = y - A @ coef
    dof = len(y) - A.shape[1]
    s2 = float(res @ res) / dof if dof > 0 else 0.0
    cov = s2 * np.linalg.inv(A.T @ A)
    model = "pure" if pure else ("b2+b4" if b4 else "b2")
    return VolumeFit(-float(coef[0]), tuple(float(c) for c in coef), cov,
                     float(np.sqrt(res @ res)), model)
