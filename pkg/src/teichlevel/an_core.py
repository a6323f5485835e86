"""Arithmetic, kernels and contour quadrature on A_N = R x Z/N.

Functions on A_N are passed around as callables ``f(x, n)`` where ``x`` is a
numpy array of complex coordinates and ``n`` an integer residue; they must
return an array of the same shape.  Integration over the finite factor is an
exact sum, the real factor uses adaptive Gauss-Legendre panels.
"""
from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Callable

import numpy as np

ANFunction = Callable[[np.ndarray, int], np.ndarray]


class NonConvergent(RuntimeError):
    """Quadrature did not reach the requested tolerance."""


@dataclass(frozen=True)
class ModularParam:
    """The pair (b, N) together with every derived constant."""

    b: complex
    N: int
    c_b: complex = field(init=False, repr=False)
    omega: complex = field(init=False, repr=False)
    q_poch: complex = field(init=False, repr=False)
    q_tilde_poch: complex = field(init=False, repr=False)
    zeta0: complex = field(init=False, repr=False)
    zeta_inv: complex = field(init=False, repr=False)

    def __post_init__(self):
        b = complex(self.b)
        N = int(self.N)
        if N < 1 or N % 2 == 0:
            raise ValueError(f"N must be a positive odd integer, got {self.N}")
        if b.real <= 0:
            raise ValueError(f"Re(b) must be positive, got {b}")
        if abs(b.imag) > 1e-14 and abs(abs(b) - 1.0) > 1e-12:
            raise ValueError(f"b must be real or on the unit circle, got {b}")
        if abs(b.imag) <= 1e-14:
            b = complex(b.real, 0.0)
        object.__setattr__(self, "b", b)
        object.__setattr__(self, "N", N)
        cb = 0.5j * (b + 1 / b)
        set_ = lambda k, v: object.__setattr__(self, k, v)
        set_("c_b", cb)
        set_("omega", cmath.exp(2j * math.pi / N))
        set_("q_poch", cmath.exp(1j * math.pi * b * b / N))
        set_("q_tilde_poch", cmath.exp(-1j * math.pi / (b * b) / N))
        set_("zeta0", cmath.exp(-1j * math.pi * (N - 4 * cb * cb / N) / 12))
        set_("zeta_inv", cmath.exp(1j * math.pi * (N + 2 * cb * cb / N) / 6))

    @property
    def sqrtN(self) -> float:
        return math.sqrt(self.N)

    @property
    def is_real_b(self) -> bool:
        return self.b.imag == 0.0

    def dual(self) -> "ModularParam":
        """Parameter with b replaced by 1/b."""
        return ModularParam(1 / self.b, self.N)


@dataclass(frozen=True)
class ANPoint:
    """A point (x, n) of A_N; x may be complex to encode a contour shift."""

    x: complex
    n: int
    N: int = 1

    def __post_init__(self):
        object.__setattr__(self, "x", complex(self.x))
        object.__setattr__(self, "n", int(self.n) % int(self.N))

    def __neg__(self) -> "ANPoint":
        return ANPoint(-self.x, -self.n, self.N)

    def __add__(self, other: "ANPoint") -> "ANPoint":
        return ANPoint(self.x + other.x, self.n + other.n, self.N)

    def __sub__(self, other: "ANPoint") -> "ANPoint":
        return ANPoint(self.x - other.x, self.n - other.n, self.N)


@dataclass(frozen=True)
class Contour:
    """Horizontal line Im x = offset_d, truncated to |Re x| <= x_max.

    ``x_max=None`` lets the integrator grow the window until the outermost
    panels are negligible.
    """

    offset_d: float = 0.0
    x_max: float | None = None
    rel_tol: float = 1e-10
    max_nodes: int = 200_000

    def __post_init__(self):
        if self.x_max is not None and self.x_max <= 0:
            raise ValueError("x_max must be positive")
        if self.rel_tol <= 0:
            raise ValueError("rel_tol must be positive")


@dataclass(frozen=True)
class QuadratureResult:
    value: complex
    err_estimate: float
    nodes_used: int


# ---------------------------------------------------------------- kernels

def fourier_kernel(a: ANPoint, a2: ANPoint, p: ModularParam) -> complex:
    return cmath.exp(2j * math.pi * a.x * a2.x) * cmath.exp(-2j * math.pi * a.n * a2.n / p.N)


def gauss_kernel(a: ANPoint, p: ModularParam) -> complex:
    return cmath.exp(1j * math.pi * a.x * a.x) * cmath.exp(-1j * math.pi * a.n * (a.n + p.N) / p.N)


def fourier_kernel_arr(x, n, y, m, N: int):
    """Vectorized <(x,n),(y,m)>."""
    return np.exp(2j * np.pi * np.asarray(x) * y) * np.exp(-2j * np.pi * ((n * m) % N) / N)


def gauss_kernel_arr(x, n, N: int):
    """Vectorized <(x,n)>."""
    n = int(n) % N
    return np.exp(1j * np.pi * np.asarray(x) ** 2) * np.exp(-1j * np.pi * (n * (n + N) % (2 * N)) / N)


# ------------------------------------------------------------- quadrature

@lru_cache(maxsize=None)
def _gl_pair(order: int):
    lo = np.polynomial.legendre.leggauss(order)
    hi = np.polynomial.legendre.leggauss(2 * order)
    return lo, hi


def _panel_sums(g, a: np.ndarray, h: np.ndarray, order: int):
    """Low/high order Gauss-Legendre sums for panels [a, a+h].

    g may return shape (npts,) or (npts, k) for k simultaneous integrands.
    """
    (xl, wl), (xh, wh) = _gl_pair(order)
    mid = a + h / 2
    pts_l = mid[:, None] + (h / 2)[:, None] * xl[None, :]
    pts_h = mid[:, None] + (h / 2)[:, None] * xh[None, :]
    allpts = np.concatenate([pts_l.ravel(), pts_h.ravel()])
    vals = np.asarray(g(allpts), dtype=complex)
    k = pts_l.size
    tail = vals.shape[1:]
    vl = vals[:k].reshape(pts_l.shape + tail)
    vh = vals[k:].reshape(pts_h.shape + tail)
    scale = (h / 2).reshape((-1,) + (1,) * len(tail))
    il = np.einsum("pj...,j->p...", vl, wl) * scale
    ih = np.einsum("pj...,j->p...", vh, wh) * scale
    return il, ih, allpts.size


def _mag(v) -> float:
    return float(np.max(np.abs(v))) if np.ndim(v) else abs(v)


def integrate_line(g: Callable[[np.ndarray], np.ndarray], lo: float, hi: float,
                   rel_tol: float = 1e-10, abs_tol: float = 0.0, panels: int = 32,
                   order: int = 16, max_nodes: int = 200_000):
    """Adaptive panel quadrature of a vectorized g over the real interval [lo, hi].

    Returns (value, error_estimate, nodes_used).  Panels whose low and high
    order sums disagree are bisected until the summed error falls below the
    tolerance; all panels of one generation are evaluated in one call to g.
    Vector-valued g is integrated componentwise with a shared mesh.
    """
    edges = np.linspace(lo, hi, panels + 1)
    active_a, active_h = edges[:-1], np.diff(edges)
    done_val = 0j
    done_err = 0.0
    used = 0
    while True:
        il, ih, k = _panel_sums(g, active_a, active_h, order)
        used += k
        diff = np.abs(ih - il)
        err = diff.reshape(len(active_a), -1).max(axis=1)
        total = done_val + ih.sum(axis=0)
        tol = max(rel_tol * _mag(total), abs_tol)
        # accept panels already well inside their share of the budget
        share = tol * active_h / (hi - lo)
        ok = err <= share
        done_val = done_val + ih[ok].sum(axis=0)
        done_err += err[ok].sum()
        rest_err = err[~ok].sum()
        if ok.all() or done_err + rest_err <= tol or used > max_nodes:
            return done_val + ih[~ok].sum(axis=0), done_err + rest_err, used
        ba, bh = active_a[~ok], active_h[~ok] / 2
        active_a = np.concatenate([ba, ba + bh])
        active_h = np.concatenate([bh, bh])


def _integrate_real_line(g, offset: float, x_max: float | None, rel_tol: float, max_nodes: int):
    """Integral of g over R + i*offset with automatic truncation."""
    gz = lambda t: g(t + 1j * offset)
    if x_max is not None:
        return integrate_line(gz, -x_max, x_max, rel_tol=rel_tol, max_nodes=max_nodes)
    width = 8.0
    val, err, used = integrate_line(gz, -width, width, rel_tol=rel_tol, max_nodes=max_nodes)
    # grow each tail separately so a slowly decaying side does not drag the
    # other one out to where the integrand overflows
    edges = {-1: width, 1: width}
    while used < max_nodes and edges:
        for side in list(edges):
            w = edges[side]
            if w >= 1e4:
                del edges[side]
                continue
            atol = 0.1 * rel_tol * _mag(val)
            lo, hi = (-2 * w, -w) if side < 0 else (w, 2 * w)
            tv, te, tu = integrate_line(gz, lo, hi, rel_tol=rel_tol, abs_tol=atol, max_nodes=max_nodes)
            val = val + tv
            err += te
            used += tu
            edges[side] = 2 * w
            if _mag(tv) <= 0.05 * rel_tol * _mag(val) or _mag(val) == 0:
                del edges[side]
    return val, err, used


def haar_integrate_many(f, contour: Contour | None, p: ModularParam):
    """Like haar_integrate for f(x, n) returning shape (npts, k); returns (values, err, nodes)."""
    contour = contour or Contour()
    total, err, used = 0j, 0.0, 0
    for n in range(p.N):
        v, e, k = _integrate_real_line(lambda z, n=n: f(z, n), contour.offset_d, contour.x_max,
                                       contour.rel_tol, contour.max_nodes)
        total = total + v
        err += e
        used += k
    total = np.asarray(total) / p.sqrtN
    err /= p.sqrtN
    if not np.all(np.isfinite(total)) or err > max(contour.rel_tol * _mag(total), 1e-15):
        raise NonConvergent(f"quadrature error {err:.3g} exceeds tolerance for |value|={_mag(total):.3g}")
    return total, float(err), int(used)


def haar_integrate(f: ANFunction, contour: Contour | None, p: ModularParam) -> QuadratureResult:
    """(1/sqrt N) * sum_n integral over R + i d of f(x, n)."""
    val, err, used = haar_integrate_many(lambda z, n: np.asarray(f(z, n), dtype=complex), contour, p)
    return QuadratureResult(complex(val), err, used)


def _transform(f: ANFunction, p: ModularParam, contour: Contour | None, sign: int) -> ANFunction:
    N = p.N

    def transformed(x, n):
        xs = np.atleast_1d(np.asarray(x, dtype=complex))
        ns = np.broadcast_to(np.asarray(n), xs.shape)

        def g(y, m):
            base = np.asarray(f(y, m), dtype=complex)[:, None]
            ker = np.exp(sign * 2j * np.pi * y[:, None] * xs[None, :]) \
                * np.exp(-sign * 2j * np.pi * ((ns * m) % N) / N)[None, :]
            return base * ker
        vals, _, _ = haar_integrate_many(g, contour, p)
        vals = np.asarray(vals)
        return vals if np.ndim(x) else complex(vals[0])
    return transformed


def fourier_transform(f: ANFunction, p: ModularParam, contour: Contour | None = None) -> ANFunction:
    """F(f)(x,n) = integral of f(y,m) <(x,n),(y,m)> d(y,m), sampled on demand.

    The returned callable accepts an array of x (with scalar or matching n)
    and shares one quadrature mesh across all requested points.
    """
    return _transform(f, p, contour, 1)


def inverse_fourier(f: ANFunction, p: ModularParam, contour: Contour | None = None) -> ANFunction:
    """Transform with the conjugate kernel, inverse to fourier_transform."""
    return _transform(f, p, contour, -1)
