"""Independent references and diagnostics.

Nothing in here reuses the fractional stencil code: the classical theta
scheme has its own tridiagonal solver and the Weyl-integral oracle works
directly from the integral definition with adaptive quadrature.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy import integrate

from .coeffs import feller_pair
from .errors import ConvergenceError, DomainError, ShapeError
from .operator import FieldState, SpatialGrid


def heat_kernel(x, t: float, K: float = 1.0):
    """Fundamental solution (4 pi K t)^(-1/2) exp(-x^2 / (4 K t))."""
    if not t > 0.0:
        raise DomainError(f"t must be positive, got {t!r}")
    if not K > 0.0:
        raise DomainError(f"K must be positive, got {K!r}")
    x = np.asarray(x, dtype=float)
    return np.exp(-(x**2) / (4.0 * K * t)) / math.sqrt(4.0 * math.pi * K * t)


def _thomas(lower: float, diag: float, upper: float, rhs: np.ndarray) -> np.ndarray:
    """Solve a constant-coefficient tridiagonal system."""
    n = rhs.size
    c = np.empty(n)
    d = np.empty(n)
    c[0] = upper / diag
    d[0] = rhs[0] / diag
    for i in range(1, n):
        m = diag - lower * c[i - 1]
        c[i] = upper / m
        d[i] = (rhs[i] - lower * d[i - 1]) / m
    x = np.empty(n)
    x[-1] = d[-1]
    for i in range(n - 2, -1, -1):
        x[i] = d[i] - c[i] * x[i + 1]
    return x


def classical_theta_step(C, r: float, sigma: float, gL: float, gR: float) -> np.ndarray:
    """One step of the classical theta scheme for u_t = K u_xx.

    ``r = K dt / h**2``; ``sigma = 1`` is FTCS, ``0.5`` Crank-Nicolson and
    ``0`` backward Euler.  ``gL``/``gR`` are the new boundary values.
    """
    C = np.asarray(C, dtype=float)
    if C.ndim != 1 or C.size < 3:
        raise ShapeError("need a 1-D field with at least 3 nodes")
    lap = C[:-2] - 2.0 * C[1:-1] + C[2:]
    rhs = C[1:-1] + sigma * r * lap
    out = np.empty_like(C)
    out[0], out[-1] = gL, gR
    if sigma == 1.0:
        out[1:-1] = rhs
        return out
    theta = (1.0 - sigma) * r
    rhs = rhs.copy()
    rhs[0] += theta * gL
    rhs[-1] += theta * gR
    out[1:-1] = _thomas(-theta, 1.0 + 2.0 * theta, -theta, rhs)
    return out


# (u, u'', interval outside which u'' is negligible or zero)
def _gauss(x):
    return np.exp(-x * x)


def _gauss_d2(x):
    return (4.0 * x * x - 2.0) * np.exp(-x * x)


def _sech2(x):
    return 1.0 / np.cosh(x) ** 2


def _sech2_d2(x):
    s2 = 1.0 / np.cosh(x) ** 2
    return s2 * (4.0 - 6.0 * s2)


def _bump(x):
    x = np.asarray(x, dtype=float)
    out = np.zeros_like(x)
    m = np.abs(x) < 1.0
    out[m] = np.exp(-1.0 / (1.0 - x[m] ** 2))
    return out[()] if out.ndim == 0 else out


def _bump_d2(x):
    x = np.asarray(x, dtype=float)
    out = np.zeros_like(x)
    m = np.abs(x) < 1.0
    xm = x[m]
    s = 1.0 - xm**2
    out[m] = np.exp(-1.0 / s) * (6.0 * xm**4 - 2.0) / s**4
    return out[()] if out.ndim == 0 else out


def _zero(x):
    return np.zeros_like(np.asarray(x, dtype=float))


TEST_FUNCTIONS = {
    "gaussian": (_gauss, _gauss_d2, (-9.0, 9.0)),
    "sech2": (_sech2, _sech2_d2, (-25.0, 25.0)),
    "bump": (_bump, _bump_d2, (-1.0, 1.0)),
    "constant": (lambda x: np.ones_like(np.asarray(x, dtype=float)), _zero, (0.0, 0.0)),
}


def _one_sided(d2u, x, beta, lo, hi, side, rtol):
    """(1/Gamma(beta)) int_0^inf u''(x -/+ s) s^(beta-1) ds by two routes."""
    if side == "left":
        a, b = max(0.0, x - hi), x - lo
        g = lambda s: d2u(x - s)
    else:
        a, b = max(0.0, lo - x), hi - x
        g = lambda s: d2u(x + s)
    if b <= a:
        return 0.0

    # route 1: t = s^beta removes the endpoint singularity
    inv = 1.0 / beta
    v1, e1 = integrate.quad(lambda t: g(t**inv), a**beta, b**beta, epsabs=0.0, epsrel=rtol * 1e-3, limit=500)
    v1 /= math.gamma(beta + 1.0)

    # route 2: algebraic-weight quadrature (QAWS) in the original variable
    if a == 0.0:
        v2, e2 = integrate.quad(g, 0.0, b, weight="alg", wvar=(beta - 1.0, 0.0), epsabs=0.0, epsrel=rtol * 1e-3, limit=500)
    else:
        v2, e2 = integrate.quad(lambda s: g(s) * s ** (beta - 1.0), a, b, epsabs=0.0, epsrel=rtol * 1e-3, limit=500)
    v2 /= math.gamma(beta)

    scale = max(abs(v1), abs(v2), 1e-300)
    if abs(v1 - v2) > rtol * scale and abs(v1 - v2) > 1e-12:
        raise ConvergenceError(f"quadrature routes disagree: {v1!r} vs {v2!r}")
    return v1


def weyl_quadrature_oracle(name: str, x: float, alpha: float, theta: float = 0.0, rtol: float = 1e-6) -> float:
    """Riesz-Feller derivative of a catalog function at ``x`` from the integral form.

    Uses -(c_L I_L^{2-alpha} u'' + c_R I_R^{2-alpha} u''), with the Weyl
    integrals computed by adaptive quadrature and u'' known analytically.
    """
    try:
        _, d2u, (lo, hi) = TEST_FUNCTIONS[name]
    except KeyError:
        raise ValueError(f"unknown test function {name!r}; choose from {sorted(TEST_FUNCTIONS)}") from None
    cl, cr = feller_pair(alpha, theta)
    if alpha == 2.0:
        return float(d2u(x))
    if lo == hi:
        return 0.0
    beta = 2.0 - alpha
    left = _one_sided(d2u, x, beta, lo, hi, "left", rtol)
    right = _one_sided(d2u, x, beta, lo, hi, "right", rtol)
    return -(cl * left + cr * right)


def _trapezoid_weights(n: int, h: float) -> np.ndarray:
    w = np.full(n, h)
    w[0] = w[-1] = 0.5 * h
    return w


def _values(a):
    return a.values if isinstance(a, FieldState) else np.asarray(a, dtype=float)


def compare_fields(a, b, grid: SpatialGrid) -> tuple[float, float]:
    """Discrete L2 (trapezoid) and max norms of a - b."""
    d = _values(a) - _values(b)
    if d.shape != (grid.N + 1,):
        raise ShapeError(f"fields must have {grid.N + 1} values")
    l2 = math.sqrt(float(np.sum(_trapezoid_weights(d.size, grid.h) * d * d)))
    return l2, float(np.max(np.abs(d)))


@dataclass(frozen=True)
class Diagnostics:
    total_mass: float
    center_of_mass: float
    tail_mass: float
    symmetry_defect: float


def tail_mass(C, grid: SpatialGrid, q: float = 0.5) -> float:
    """Fraction of the mass outside the central window of width q (R - L)."""
    c = _values(C)
    x = grid.x
    mid = 0.5 * (grid.L + grid.R)
    half = 0.5 * q * (grid.R - grid.L)
    w = _trapezoid_weights(c.size, grid.h) * c
    dist = np.abs(x - mid)
    on_edge = np.abs(dist - half) <= 1e-9 * grid.h
    outside = (dist > half) & ~on_edge
    return float((np.sum(w[outside]) + 0.5 * np.sum(w[on_edge])) / np.sum(w))


def diagnostics(C, grid: SpatialGrid, q: float = 0.5) -> Diagnostics:
    c = _values(C)
    mass = float(np.sum(_trapezoid_weights(c.size, grid.h) * c))
    total = float(np.sum(c))
    com = float(np.sum(grid.x * c) / total) if total != 0.0 else math.nan
    tm = tail_mass(c, grid, q) if mass != 0.0 else math.nan
    sym = float(np.max(np.abs(c - c[::-1])))
    return Diagnostics(mass, com, tm, sym)
