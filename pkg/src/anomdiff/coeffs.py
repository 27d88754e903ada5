"""Discretization coefficients of the Riesz-Feller derivative.

Everything here is a pure function of (alpha, theta) and integer offsets:

* ``feller_pair``            -- the skewness pair (c_L, c_R)
* ``weyl_trapezoid_weight``  -- product-trapezoid weights v_k of a Weyl integral
* ``riesz_feller_weight``    -- stencil weights w_k of the derivative itself
* ``cauchy_limit_weight``    -- the alpha -> 1+ (theta = 0) table
* ``tail_weights``           -- sums of w_k over the virtual nodes past each wall
* ``p_coefficient``          -- explicit update weights p_k

Large offsets are evaluated with a binomial series instead of the raw
finite-difference formula; the raw formula loses all significant digits for
|k| of a few thousand.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import cached_property

import numpy as np
from scipy.linalg import toeplitz

from .errors import DomainError, SkewError

# centre offset above which the binomial series replaces direct differencing
_SERIES_MIN_CENTER = 6.0
_SERIES_TERMS = 60
_SKEW_SLACK = 1e-12

# (offset, coefficient) pairs; the fourth difference is centred on k, the
# third difference on m + 1/2
_FOURTH_DIFF = ((2.0, 1.0), (1.0, -4.0), (0.0, 6.0), (-1.0, -4.0), (-2.0, 1.0))
_THIRD_DIFF = ((1.5, -1.0), (0.5, 3.0), (-0.5, -3.0), (-1.5, 1.0))


def _check_order(alpha: float, *, solver: bool) -> None:
    if not math.isfinite(alpha):
        raise DomainError(f"alpha must be finite, got {alpha!r}")
    if solver:
        if not 1.0 < alpha <= 2.0:
            raise DomainError(f"alpha must lie in (1, 2], got {alpha!r}")
    elif not 0.0 < alpha <= 2.0 or alpha == 1.0:
        raise DomainError(f"alpha must lie in (0, 2] with alpha != 1, got {alpha!r}")


def skew_bound(alpha: float) -> float:
    return min(alpha, 2.0 - alpha)


def _check_skew(alpha: float, theta: float) -> None:
    if not math.isfinite(theta) or abs(theta) > skew_bound(alpha) + _SKEW_SLACK:
        raise SkewError(
            f"|theta| must not exceed min(alpha, 2 - alpha) = {skew_bound(alpha)!r} "
            f"(alpha={alpha!r}, theta={theta!r})"
        )


@dataclass(frozen=True)
class FractionalParams:
    """Order, skewness and diffusion coefficient of the fractional equation.

    ``k_alpha`` carries units of m**alpha / s.
    """

    alpha: float
    theta: float = 0.0
    k_alpha: float = 1.0

    def __post_init__(self):
        _check_order(self.alpha, solver=True)
        _check_skew(self.alpha, self.theta)
        if not (math.isfinite(self.k_alpha) and self.k_alpha > 0.0):
            raise DomainError(f"k_alpha must be positive, got {self.k_alpha!r}")


def _sum_difference(alpha: float, theta: float) -> tuple[float, float]:
    """Return (c_L + c_R, c_L - c_R) from trig forms free of 0/0 cancellation.

    c_L + c_R = cos(theta pi/2) / cos(alpha pi/2) and
    c_L - c_R = -sin(theta pi/2) / sin(alpha pi/2).  Both denominators are
    rewritten around the nearest zero (alpha = 1 and alpha = 2 respectively)
    so that they keep full relative accuracy there.
    """
    half_pi = 0.5 * math.pi
    total = math.cos(theta * half_pi) / math.sin((1.0 - alpha) * half_pi)
    if alpha > 1.0:
        denom = math.sin((2.0 - alpha) * half_pi)
    else:
        denom = math.sin(alpha * half_pi)
    diff = 0.0 if theta == 0.0 else -math.sin(theta * half_pi) / denom
    return total, diff


def feller_pair(alpha: float, theta: float = 0.0) -> tuple[float, float]:
    """Skewness coefficients (c_L, c_R) of the Riesz-Feller operator.

    Equal to ``sin((alpha -/+ theta) pi / 2) / sin(alpha pi)``.  At
    ``alpha == 2`` the exact limit (-1/2, -1/2) is returned.

    >>> feller_pair(2.0, 0.0)
    (-0.5, -0.5)
    """
    _check_order(alpha, solver=False)
    _check_skew(alpha, theta)
    if alpha == 2.0:
        return -0.5, -0.5
    total, diff = _sum_difference(alpha, theta)
    return 0.5 * (total + diff), 0.5 * (total - diff)


def weyl_trapezoid_weight(k: int, order: float) -> float:
    """Weight of sample u_{i-k} in the product-trapezoid Weyl integral.

    The integral of order ``order`` at x_i is approximated by
    ``h**order * sum_k u_{i-k} v_k``.
    """
    if not (math.isfinite(order) and 0.0 < order <= 2.0):
        raise DomainError(f"order must lie in (0, 2], got {order!r}")
    if k < 0:
        raise DomainError(f"offset k must be non-negative, got {k!r}")
    g = math.gamma(2.0 + order)
    if k == 0:
        return 1.0 / g
    e = 1.0 + order
    return ((k + 1) ** e - 2.0 * k**e + (k - 1) ** e) / g


def weyl_trapezoid_weights(kmax: int, order: float) -> np.ndarray:
    """Vector of v_0 .. v_kmax."""
    weyl_trapezoid_weight(0, order)  # validates order
    k = np.arange(kmax + 1, dtype=float)
    e = 1.0 + order
    v = (k + 1.0) ** e - 2.0 * k**e + np.abs(k - 1.0) ** e
    v[0] = 1.0
    return v / math.gamma(2.0 + order)


def _binomials(alpha: float, n: int) -> np.ndarray:
    """binom(p, m) for p = 3 - alpha, m = 0..n-1, keeping (p - j) exact."""
    out = np.empty(n)
    b = 1.0
    for m in range(n):
        out[m] = b
        b *= ((3.0 - m) - alpha) / (m + 1.0)
    return out


def _stencil_power(center: np.ndarray, alpha: float, stencil) -> np.ndarray:
    """Evaluate sum_j c_j (center + o_j)**p with p = 3 - alpha.

    The stencil annihilates polynomials of degree < len(stencil) - 1, so the
    result is tiny compared with the individual terms.  Small centres use
    x**p = x**n + x**n * expm1((p - n) log x) (the x**n part cancels
    exactly); large centres use the binomial expansion in 1/center.
    """
    center = np.asarray(center, dtype=float)
    out = np.zeros_like(center)
    p = 3.0 - alpha
    n = 2 if alpha <= 1.5 else 1
    q = (3.0 - n) - alpha

    near = center < _SERIES_MIN_CENTER
    if np.any(near):
        c = center[near]
        acc = np.zeros_like(c)
        for off, coef in stencil:
            x = c + off
            pos = x > 0.0
            term = np.zeros_like(x)
            xp = x[pos]
            term[pos] = xp**n * np.expm1(q * np.log(xp))
            acc += coef * term
        out[near] = acc

    far = ~near
    if np.any(far):
        c = center[far]
        binom = _binomials(alpha, _SERIES_TERMS)
        acc = np.zeros_like(c)
        # highest order first so the small terms are summed before the large
        for m in range(_SERIES_TERMS - 1, -1, -1):
            moment = sum(coef * off**m for off, coef in stencil)
            if moment == 0.0:
                continue
            acc += binom[m] * moment * np.power(c, p - m)
        out[far] = acc
    return out


def _fourth_difference(k: np.ndarray, alpha: float) -> np.ndarray:
    """(k+2)^p - 4(k+1)^p + 6k^p - 4(k-1)^p + (k-2)^p, p = 3 - alpha, k >= 2."""
    return _stencil_power(k, alpha, _FOURTH_DIFF)


def _tail_bracket(m: np.ndarray, alpha: float) -> np.ndarray:
    """-(m+2)^p + 3(m+1)^p - 3m^p + (m-1)^p, p = 3 - alpha, m >= 1."""
    return _stencil_power(np.asarray(m, dtype=float) + 0.5, alpha, _THIRD_DIFF)


_CLASSICAL = {-1: 1.0, 0: -2.0, 1: 1.0}


def riesz_feller_weights(k, alpha: float, theta: float = 0.0) -> np.ndarray:
    """Vectorized ``riesz_feller_weight`` over an array of integer offsets."""
    _check_order(alpha, solver=True)
    cl, cr = feller_pair(alpha, theta)
    k = np.asarray(k)
    if not np.issubdtype(k.dtype, np.integer):
        if not np.all(np.mod(k, 1) == 0):
            raise DomainError("offsets k must be integers")
        k = k.astype(np.int64)

    if alpha == 2.0:
        out = np.zeros(k.shape)
        for off, val in _CLASSICAL.items():
            out[k == off] = val
        return out

    total, diff = _sum_difference(alpha, theta)
    q = 1.0 - alpha
    ln2, ln3 = math.log(2.0), math.log(3.0)
    # 3^p - 2^(p+2) + 6 written as e - 1 with e built from expm1
    e1 = 9.0 * math.expm1(q * ln3) - 16.0 * math.expm1(q * ln2)

    scale = -1.0 / math.gamma(4.0 - alpha)
    out = np.empty(k.shape)
    out[k == 0] = scale * 4.0 * math.expm1(q * ln2) * total
    out[k == 1] = scale * (e1 * cr + diff)
    out[k == -1] = scale * (e1 * cl - diff)
    right = k >= 2
    if np.any(right):
        out[right] = scale * cr * _fourth_difference(k[right].astype(float), alpha)
    left = k <= -2
    if np.any(left):
        out[left] = scale * cl * _fourth_difference(-k[left].astype(float), alpha)
    return out


def riesz_feller_weight(k: int, alpha: float, theta: float = 0.0) -> float:
    """Weight w_k of the grid Riesz-Feller derivative for 1 < alpha <= 2.

    The derivative at node i is ``h**-alpha * sum_k u_{i+k} w_k``.  At
    ``alpha == 2`` this is exactly the 1, -2, 1 second-difference stencil.
    """
    return float(riesz_feller_weights(np.array([k]), alpha, theta)[0])


def _log_fourth_difference(k: np.ndarray) -> np.ndarray:
    """Fourth difference of x^2 log x at integer k >= 2 (0 log 0 = 0)."""
    k = np.asarray(k, dtype=float)
    out = np.empty_like(k)
    near = k < _SERIES_MIN_CENTER
    if np.any(near):
        c = k[near]
        acc = np.zeros_like(c)
        # the x^2 log k part is annihilated by the stencil; keep log(x / k)
        for off, coef in _FOURTH_DIFF:
            x = c + off
            pos = x > 0.0
            term = np.zeros_like(x)
            term[pos] = x[pos] ** 2 * np.log1p(off / c[pos])
            acc += coef * term
        out[near] = acc
    far = ~near
    if np.any(far):
        c = k[far]
        # (1+u)^2 log(1+u) = sum a_m u^m
        ell = [0.0] + [(-1.0) ** (m + 1) / m for m in range(1, _SERIES_TERMS + 1)]
        acc = np.zeros_like(c)
        for m in range(_SERIES_TERMS, 3, -1):
            if m % 2:
                continue
            a_m = ell[m] + 2.0 * ell[m - 1] + ell[m - 2]
            acc += a_m * (2.0 ** (m + 1) - 8.0) * c ** (2.0 - m)
        out[far] = acc
    return out


def cauchy_limit_weights(k) -> np.ndarray:
    """Vectorized ``cauchy_limit_weight``."""
    k = np.asarray(k)
    a = np.abs(k)
    out = np.empty(k.shape)
    out[a == 0] = -8.0 * math.log(2.0)
    out[a == 1] = 16.0 * math.log(2.0) - 9.0 * math.log(3.0)
    big = a >= 2
    if np.any(big):
        out[big] = -_log_fourth_difference(a[big])
    return out / (2.0 * math.pi)


def cauchy_limit_weight(k: int) -> float:
    """Limit of w_k as alpha -> 1+ with theta = 0.

    The operator itself is singular at alpha = 1, so this table is a separate
    entry point rather than a value of ``riesz_feller_weight``.
    """
    return float(cauchy_limit_weights(np.array([k]))[0])


def tail_weights(i: int, N: int, alpha: float, theta: float = 0.0) -> tuple[float, float]:
    """Closed-form sums (sL_i, sR_i) of w_k over the virtual nodes.

    sL_i sums w_k for k <= -i-1 (nodes left of x_0), sR_i for k >= N-i+1.
    """
    if not 1 <= i <= N - 1:
        raise IndexError(f"node index {i} outside 1..{N - 1}")
    sl, sr = tail_weight_arrays(N, alpha, theta)
    return float(sl[i - 1]), float(sr[i - 1])


def tail_weight_arrays(N: int, alpha: float, theta: float = 0.0) -> tuple[np.ndarray, np.ndarray]:
    """sL_i and sR_i for i = 1..N-1 (index 0 holds i = 1)."""
    _check_order(alpha, solver=True)
    cl, cr = feller_pair(alpha, theta)
    i = np.arange(1, N, dtype=float)
    if alpha == 2.0:
        return np.zeros_like(i), np.zeros_like(i)
    scale = -1.0 / math.gamma(4.0 - alpha)
    sl = scale * cl * _tail_bracket(i, alpha)
    sr = scale * cr * _tail_bracket(N - i, alpha)
    return sl, sr


def p_coefficient(k: int, params: FractionalParams, dt: float, h: float) -> float:
    """Weight p_k of the explicit update C_i <- sum_k C_{i+k} p_k."""
    if not (h > 0.0 and dt > 0.0):
        raise DomainError("h and dt must be positive")
    r = params.k_alpha * dt / h**params.alpha
    w = riesz_feller_weight(k, params.alpha, params.theta)
    return 1.0 + r * w if k == 0 else r * w


@dataclass(frozen=True)
class WeightTable:
    """Precomputed weights for one (alpha, theta, N).

    ``w`` holds w_k for k = -N..N (``w[k + N]``), ``sL``/``sR`` hold the tail
    sums for interior nodes i = 1..N-1 (``sL[i - 1]``).
    """

    alpha: float
    theta: float
    N: int
    w: np.ndarray
    sL: np.ndarray
    sR: np.ndarray
    cL: float
    cR: float

    @classmethod
    def build(cls, alpha: float, theta: float, N: int) -> "WeightTable":
        if int(N) != N or N < 3:
            raise DomainError(f"N must be an integer >= 3, got {N!r}")
        N = int(N)
        cl, cr = feller_pair(alpha, theta)
        w = riesz_feller_weights(np.arange(-N, N + 1), alpha, theta)
        sl, sr = tail_weight_arrays(N, alpha, theta)
        for arr in (w, sl, sr):
            arr.setflags(write=False)
        return cls(alpha, theta, N, w, sl, sr, cl, cr)

    @property
    def offsets(self) -> np.ndarray:
        return np.arange(-self.N, self.N + 1)

    def weight(self, k: int) -> float:
        if abs(k) > self.N:
            raise IndexError(f"offset {k} outside table range +-{self.N}")
        return float(self.w[k + self.N])

    def as_dict(self) -> dict[int, float]:
        return {int(k): float(v) for k, v in zip(self.offsets, self.w)}

    def tails(self, i: int) -> tuple[float, float]:
        if not 1 <= i <= self.N - 1:
            raise IndexError(f"node index {i} outside 1..{self.N - 1}")
        return float(self.sL[i - 1]), float(self.sR[i - 1])

    @cached_property
    def interior_matrix(self) -> np.ndarray:
        """(N-1) x (N+1) matrix with entry w_{j-i} at row i-1, column j."""
        N, w = self.N, self.w
        first_col = w[N - 1 :: -1][: N - 1]  # w_{-1}, w_{-2}, ..., w_{-(N-1)}
        first_row = w[N - 1 :]  # w_{-1}, w_0, ..., w_N
        m = toeplitz(first_col, first_row[: N + 1])
        m.setflags(write=False)
        return m
