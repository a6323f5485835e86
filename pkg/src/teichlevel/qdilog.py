"""Faddeev's quantum dilogarithm, its level-N version D_b and companions.

Two evaluation routes for Phi_b:

* b real: the indented contour integral is folded onto (0, inf) and
  regularized, giving

      log Phi_b(z) = i pi z^2/2 + i pi (b^2 + b^-2)/24
                     + int_0^inf [ -i sin(2zw) / (2 w sinh(bw) sinh(w/b)) + i z / w^2 ] dw,

  valid for |Im z| < |Im c_b|.  Points outside a narrower strip are brought
  in with the difference equations.
* |b| = 1, Im b > 0: the q-Pochhammer ratio.
"""
from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from enum import Enum
from functools import lru_cache

import numpy as np
from scipy.special import bernoulli

from .an_core import ANPoint, ModularParam


class PoleHit(ArithmeticError):
    """Evaluation point lies on (or within 1e-12 of) a pole."""


class EvalFailure(RuntimeError):
    pass


class RegimeError(ValueError):
    """Operation not available for this value of b."""


class DivergentProduct(ValueError):
    pass


class BranchCut(ValueError):
    pass


class SingularInput(ValueError):
    pass


class DilogRegime(Enum):
    RealB = "real"
    UnitCircleB = "unit"

    @classmethod
    def of(cls, p: ModularParam) -> "DilogRegime":
        return cls.RealB if p.is_real_b else cls.UnitCircleB


@dataclass(frozen=True)
class PoleDatum:
    l: int
    m: int
    location: ANPoint
    residue: complex


POLE_EPS = 1e-12
_LADDER_CAP = 4096
_CHUNK = 256

# ------------------------------------------------------------ q-Pochhammer


def qpoch_inf(x: complex, q: complex) -> complex:
    """(x; q)_inf = prod_{i>=0} (1 - x q^i)."""
    if abs(q) >= 1:
        raise DivergentProduct(f"|q| = {abs(q)} >= 1")
    return complex(np.exp(_log_qpoch_inf(np.asarray([x], dtype=complex), complex(q)))[0])


def qpoch_fin(x: complex, q: complex, k: int) -> complex:
    """(x; q)_k = prod_{i=0}^{k-1} (1 - x q^i)."""
    out = 1 + 0j
    for i in range(int(k)):
        out *= 1 - x * q ** i
    return out


def _log_qpoch_inf(x: np.ndarray, q: complex) -> np.ndarray:
    """Sum of log(1 - x q^i) until the terms fall below machine precision.

    The branch of the logarithm is irrelevant since only exp() of the result
    is ever used.
    """
    aq = abs(q)
    xmax = float(np.max(np.abs(x))) if x.size else 0.0
    if xmax == 0.0:
        return np.zeros_like(x)
    # |x| aq^K < 1e-18
    K = int(math.ceil((math.log(1e-18) - math.log(xmax)) / math.log(aq))) + 1
    K = max(K, 1)
    powers = q ** np.arange(K)
    acc = np.zeros_like(x)
    for start in range(0, K, 64):
        blk = powers[start:start + 64]
        acc = acc + np.log(1 - x[..., None] * blk).sum(axis=-1)
    return acc


# ------------------------------------------------------------ Phi_b, b real

@lru_cache(maxsize=64)
def _gl_nodes(order: int):
    return np.polynomial.legendre.leggauss(order)


def _sinc_m1(u):
    """sin(u)/u - 1, accurate for small complex u."""
    u = np.asarray(u, dtype=complex)
    u2 = u * u
    series = u2 * (-1 / 6 + u2 * (1 / 120 + u2 * (-1 / 5040 + u2 * (1 / 362880 - u2 / 39916800))))
    with np.errstate(invalid="ignore", divide="ignore", over="ignore"):
        direct = np.sin(u) / u - 1
    return np.where(np.abs(u) < 0.3, series, direct)


def _sinhc_m1(t):
    """sinh(t)/t - 1 for real t > 0."""
    t2 = t * t
    series = t2 * (1 / 6 + t2 * (1 / 120 + t2 * (1 / 5040 + t2 * (1 / 362880 + t2 / 39916800))))
    with np.errstate(invalid="ignore", divide="ignore", over="ignore"):
        direct = np.sinh(t) / t - 1
    return np.where(t < 0.3, series, direct)


def _log_phi_strip_real(z: np.ndarray, b: float) -> np.ndarray:
    """log Phi_b(z) from the regularized integral, for |Im z| well inside the strip.

    The w-range splits at 1.  On [0, 1] the integrand is written as
    -i z (A + B + A B) / w^2 with A = sinc(2zw) - 1 and
    B = w^2 / (sinh(bw) sinh(w/b)) - 1, which avoids cancellation near 0.
    On [1, W] the counterterm i z / w^2 is integrated exactly and the rest is
    -i sin(2zw) f(w); with equal panels, e^{2izw} = e^{2iz w_j} (e^{2izh})^k so
    the node sum collapses to a cumulative product and a matrix product.
    """
    s = b * b + 1 / (b * b)
    flat = z.ravel()
    order = np.argsort(np.abs(flat.real), kind="stable")
    res = np.empty(flat.shape, dtype=complex)
    xg, wg = _gl_nodes(24)
    for start in range(0, flat.size, _CHUNK):
        idx = order[start:start + _CHUNK]
        zz = flat[idx]
        rate = (b + 1 / b) - 2 * float(np.max(np.abs(zz.imag)))
        if rate <= 0:
            raise EvalFailure("point outside the integral's strip")
        W = max(2.0, 1.0 + 38.0 / rate)
        h = min(0.5, 0.8 * math.pi * min(b, 1 / b), 6.0 / (2 * float(np.max(np.abs(zz.real))) + 1.0))
        zc = zz[:, None]
        # [0, 1]
        n1 = int(math.ceil(1.0 / h))
        h1 = 1.0 / n1
        w = (np.arange(n1)[:, None] * h1 + h1 / 2 * (xg[None, :] + 1)).ravel()
        wt = np.tile(wg * h1 / 2, n1)
        sb, sd = _sinhc_m1(b * w), _sinhc_m1(w / b)
        B = -(sb + sd + sb * sd) / ((1 + sb) * (1 + sd))
        A = _sinc_m1(2 * zc * w)
        inner = (-1j * zc * (A + B + A * B) / (w * w)) @ wt
        # [1, W]
        K = int(math.ceil((W - 1.0) / h))
        w0 = 1.0 + h / 2 * (xg + 1)
        wk = w0[:, None] + h * np.arange(K)[None, :]
        F = (wg * h / 2)[:, None] / (2 * wk * np.sinh(b * wk) * np.sinh(wk / b))
        E0p = np.exp(2j * zc * w0)
        E0m = np.exp(-2j * zc * w0)
        Rp = np.exp(2j * zc * h) * np.ones((1, K))
        Rm = np.exp(-2j * zc * h) * np.ones((1, K))
        Rp[:, 0] = 1
        Rm[:, 0] = 1
        Pp = np.cumprod(Rp, axis=1)
        Pm = np.cumprod(Rm, axis=1)
        sp = (E0p * (Pp @ F.T)).sum(axis=1)
        sm = (E0m * (Pm @ F.T)).sum(axis=1)
        outer = -(sp - sm) / 2 + 1j * zz
        res[idx] = inner + outer
    out = 1j * math.pi * flat ** 2 / 2 + 1j * math.pi * s / 24 + res
    return out.reshape(z.shape)


def _pole_check(z: np.ndarray, b: complex):
    """Raise PoleHit when some z is within POLE_EPS of a pole of Phi_b.

    Poles sit at c_b + i (m b + l / b) with m, l >= 0.
    """
    cb = 0.5j * (b + 1 / b)
    d = np.atleast_1d((z - cb) / 1j).ravel()
    if b.imag == 0:
        br = b.real
        cand = d[(np.abs(d.imag) < POLE_EPS) & (d.real > -POLE_EPS)]
        for dd in cand:
            lmax = int(dd.real * br) + 1
            for l in range(0, min(lmax, 10_000) + 1):
                m = round((dd.real - l / br) / br)
                if m >= 0 and abs(dd - m * br - l / br) < POLE_EPS:
                    raise PoleHit(f"Phi_b pole at z = {dd * 1j + cb}")
        return
    # b and 1/b are independent over R: solve d = m b + l / b for real (m, l)
    u, v = b, 1 / b
    det = u.real * v.imag - u.imag * v.real
    m = (d.real * v.imag - d.imag * v.real) / det
    l = (u.real * d.imag - u.imag * d.real) / det
    mr, lr = np.round(m), np.round(l)
    near = np.abs(d - mr * u - lr * v) < POLE_EPS
    if np.any(near & (mr >= 0) & (lr >= 0)):
        i = int(np.argmax(near & (mr >= 0) & (lr >= 0)))
        raise PoleHit(f"Phi_b pole at z = {d[i] * 1j + cb}")


def _phi_real(z: np.ndarray, b: float) -> np.ndarray:
    # Phi(z) Phi(-z) = e^{i pi z^2} / zeta_inv(N=1) moves every point to Re z <= 0
    flip = z.real > 0
    cb2 = -0.25 * (b + 1 / b) ** 2
    zinv = cmath.exp(1j * math.pi * (1 + 2 * cb2) / 6)
    zl = np.where(flip, -z, z)
    out = _phi_real_left(zl, b)
    with np.errstate(over="ignore", invalid="ignore"):
        out[flip] = np.exp(1j * math.pi * z[flip] ** 2) / zinv / out[flip]
    return out


def _phi_real_left(z: np.ndarray, b: float) -> np.ndarray:
    s = min(b, 1 / b)
    # beyond this Phi_b differs from 1 by less than ~1e-19
    far = z.real < -45.0 / (2 * math.pi * s)
    if far.any():
        out = np.ones(z.shape, dtype=complex)
        near = ~far
        if near.any():
            out[near] = _phi_real_left(z[near], b)
        return out
    bound = (b + 1 / b) / 4
    k = np.zeros(z.shape, dtype=int)
    k = np.where(z.imag > bound, np.ceil((z.imag - bound) / s), k)
    k = np.where(z.imag < -bound, -np.ceil((-z.imag - bound) / s), k).astype(int)
    if np.max(np.abs(k), initial=0) > _LADDER_CAP:
        raise EvalFailure("difference-equation ladder too long")
    z0 = z - 1j * s * k
    logv = _log_phi_strip_real(z0, b)
    val = np.exp(logv)
    ph = cmath.exp(1j * math.pi * s * s)
    # moving up: Phi(y + i s) = Phi(y) / (1 + e^{2 pi s y} e^{i pi s^2})
    kmax = int(np.max(np.abs(k), initial=0))
    y = z0.copy()
    for step in range(kmax):
        up = k > step
        dn = k < -step
        if up.any():
            val[up] = val[up] / (1 + np.exp(2 * math.pi * s * y[up]) * ph)
            y[up] = y[up] + 1j * s
        if dn.any():
            y[dn] = y[dn] - 1j * s
            val[dn] = val[dn] * (1 + np.exp(2 * math.pi * s * y[dn]) * ph)
    return val


def _phi_unit(z: np.ndarray, b: complex) -> np.ndarray:
    if b.imag < 0:
        b = 1 / b
    q = cmath.exp(1j * math.pi * b * b)
    qt = cmath.exp(-1j * math.pi / (b * b))
    cb = 0.5j * (b + 1 / b)
    # reflect Re z > 0 through the inversion relation so the products stay bounded
    flip = z.real > 0
    w = np.where(flip, -z, z)
    num = _log_qpoch_inf(np.exp(2 * math.pi * b * (w + cb)), q * q)
    den = _log_qpoch_inf(np.exp(2 * math.pi / b * (w - cb)), qt * qt)
    out = np.exp(num - den)
    if flip.any():
        inv0 = cmath.exp(1j * math.pi * (1 + 2 * cb * cb) / 6)
        zf = z[flip]
        with np.errstate(over="ignore", invalid="ignore"):
            out[flip] = np.exp(1j * math.pi * zf * zf) / (inv0 * out[flip])
    return out


def phi_b(z, p: ModularParam):
    """Faddeev's Phi_b(z); accepts a scalar or an array of complex points."""
    arr = np.asarray(z, dtype=complex)
    scalar = arr.ndim == 0
    arr = np.atleast_1d(arr)
    _pole_check(arr, p.b)
    if p.is_real_b:
        out = _phi_real(arr, p.b.real)
    else:
        out = _phi_unit(arr, p.b)
    if not np.all(np.isfinite(out)):
        raise EvalFailure("non-finite Phi_b value")
    return complex(out[0]) if scalar else out


# ------------------------------------------------------------------- D_b

def _frac(v):
    return v - np.floor(v)


def d_b_arr(x, n: int, p: ModularParam):
    """Vectorized D_b(x, n) over an array of x at fixed residue n."""
    arr = np.atleast_1d(np.asarray(x, dtype=complex))
    N, b, cb = p.N, p.b, p.c_b
    out = np.ones(arr.shape, dtype=complex)
    pts = []
    for j in range(N):
        shift = (1 - 1 / N) * cb - 1j * j / (b * N) - 1j * b * (((j + n) % N) / N)
        pts.append(arr / p.sqrtN + shift)
    vals = phi_b(np.stack(pts), p)
    out = np.prod(vals, axis=0)
    return out


def d_b(a: ANPoint, p: ModularParam) -> complex:
    """Level-N quantum dilogarithm D_b(x, n)."""
    return complex(d_b_arr(a.x, a.n, p)[0])


def chi_pm(sign: int, a: ANPoint, p: ModularParam) -> complex:
    e = 1 if sign > 0 else -1
    return cmath.exp(2 * math.pi * p.b ** e * a.x / p.sqrtN) * cmath.exp(e * 2j * math.pi * a.n / p.N)


def _check_poch_regime(p: ModularParam):
    if p.is_real_b or p.b.imag <= 0:
        raise RegimeError("product representation needs Im b > 0")


def d_b_poch_arr(x, n: int, p: ModularParam):
    _check_poch_regime(p)
    arr = np.atleast_1d(np.asarray(x, dtype=complex))
    b, N, sq = p.b, p.N, p.sqrtN
    w = p.omega
    cp = np.exp(2 * math.pi * b * (arr + p.c_b / sq) / sq) * cmath.exp(2j * math.pi * n / N)
    cm = np.exp(2 * math.pi / b * (arr - p.c_b / sq) / sq) * cmath.exp(-2j * math.pi * n / N)
    num = _log_qpoch_inf(cp, p.q_poch ** 2 * w)
    den = _log_qpoch_inf(cm, p.q_tilde_poch ** 2 / w)
    return np.exp(num - den)


def d_b_poch(a: ANPoint, p: ModularParam) -> complex:
    """D_b through the ratio of infinite q-Pochhammer symbols (Im b > 0)."""
    return complex(d_b_poch_arr(a.x, a.n, p)[0])


def residue_at(l: int, m: int, p: ModularParam) -> PoleDatum:
    """Location and residue (in x) of the pole of D_b labelled (l, m)."""
    _check_poch_regime(p)
    if l < 0 or m < 0:
        raise ValueError("pole labels must be non-negative")
    b, sq = p.b, p.sqrtN
    Q = p.q_poch ** 2 * p.omega
    Qt = p.q_tilde_poch ** 2 / p.omega
    loc = ANPoint(p.c_b / sq + 1j * (l / b + m * b) / sq, m - l, p.N)
    # leading minus: 1/(1 - e^{k(x-x0)}) has residue -1/k at x0
    res = -(sq / (2 * math.pi / b)) * qpoch_inf(Q, Q) / qpoch_inf(Qt, Qt)
    res *= (-Qt) ** l * Qt ** (l * (l - 1) // 2) / (qpoch_fin(Q, Q, m) * qpoch_fin(Qt, Qt, l))
    return PoleDatum(l, m, loc, complex(res))


# ------------------------------------------------------- classical dilogs

@lru_cache(maxsize=1)
def _bernoulli_coeffs(n: int = 60):
    B = bernoulli(n)
    return np.array([B[k] / math.factorial(k + 1) for k in range(n + 1)])


def _li2_series(z: complex) -> complex:
    acc, term, k = 0j, z, 1
    while True:
        t = term / (k * k)
        acc += t
        if abs(t) < 1e-17 * max(abs(acc), 1e-300):
            return acc
        k += 1
        term *= z


def _li2_unit_disc(z: complex) -> complex:
    if abs(z) < 0.5:
        return _li2_series(z)
    if abs(1 - z) < 0.5:
        return math.pi ** 2 / 6 - cmath.log(z) * cmath.log(1 - z) - _li2_series(1 - z)
    u = -cmath.log(1 - z)
    coeffs = _bernoulli_coeffs()
    acc, up = 0j, u
    for c in coeffs:
        acc += c * up
        up *= u
    return acc


def li2(z: complex) -> complex:
    """Principal branch of the dilogarithm, cut along [1, inf)."""
    z = complex(z)
    if z.imag == 0 and z.real >= 1:
        raise BranchCut(f"Li2 evaluated on its branch cut at {z}")
    if z == 0:
        return 0j
    if abs(z) <= 1:
        return _li2_unit_disc(z)
    return -_li2_unit_disc(1 / z) - math.pi ** 2 / 6 - 0.5 * cmath.log(-z) ** 2


def lobachevsky(theta: float) -> float:
    """Lobachevsky function, odd and pi-periodic."""
    t = math.fmod(theta, math.pi)
    if abs(math.sin(t)) < 1e-300 or t == 0:
        return 0.0
    return 0.5 * li2(cmath.exp(2j * t)).imag


def cyclic_phi(x: complex, n: int, p: ModularParam) -> complex:
    """Cyclic dilogarithm phi_x(n), principal branches, period N in n."""
    N, sq = p.N, p.sqrtN
    base = 1 + cmath.exp(x * sq)
    if abs(base) < 1e-14:
        raise SingularInput("1 + e^{x sqrt N} vanishes")
    y = cmath.exp(x / sq)
    half = lambda k: cmath.exp(-2j * math.pi * (k + 0.5) / N)
    val = base ** (-(N - 1) / (2 * N))
    for j in range(N):
        val *= (1 - y * half(j)) ** (j / N)
    root = base ** (1 / N)
    for k in range(int(n) % N):
        val *= (1 - y * half(k)) / root
    return val
