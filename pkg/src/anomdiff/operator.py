"""Grid application of the discrete Riesz-Feller derivative."""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .coeffs import WeightTable, riesz_feller_weights, tail_weight_arrays
from .errors import CutoffError, DomainError, ShapeError


@dataclass(frozen=True)
class SpatialGrid:
    """Uniform grid of N subintervals on [L, R]."""

    L: float
    R: float
    N: int

    def __post_init__(self):
        if not (math.isfinite(self.L) and math.isfinite(self.R)) or self.R <= self.L:
            raise DomainError(f"need finite L < R, got L={self.L!r}, R={self.R!r}")
        if int(self.N) != self.N or self.N < 3:
            raise DomainError(f"N must be an integer >= 3, got {self.N!r}")

    @property
    def h(self) -> float:
        return (self.R - self.L) / self.N

    @property
    def x(self) -> np.ndarray:
        x = self.L + np.arange(self.N + 1) * self.h
        x[-1] = self.R
        return x


@dataclass
class FieldState:
    """Field values at every node (N + 1 entries) at one time level."""

    values: np.ndarray
    time: float = 0.0
    step: int = 0

    def __post_init__(self):
        self.values = np.asarray(self.values, dtype=float)
        if self.values.ndim != 1:
            raise ShapeError("field values must be a 1-D array")
        if not np.all(np.isfinite(self.values)):
            raise FloatingPointError(f"non-finite field values at t={self.time!r}")

    def check_grid(self, grid: SpatialGrid) -> None:
        if self.values.shape[0] != grid.N + 1:
            raise ShapeError(f"field has {self.values.shape[0]} values, grid needs {grid.N + 1}")


@dataclass(frozen=True)
class UnboundedResult:
    values: np.ndarray
    tail_bound: float
    cutoff: int = field(default=0)


def _support(u: np.ndarray) -> tuple[int, int] | None:
    nz = np.flatnonzero(u)
    if nz.size == 0:
        return None
    return int(nz[0]), int(nz[-1])


def apply_unbounded(u, alpha: float, theta: float, h: float, cutoff: int | None = None) -> UnboundedResult:
    """Derivative of a windowed sample of a function on the infinite grid.

    Samples outside the window count as zero and offsets beyond ``cutoff``
    are dropped.  ``tail_bound`` bounds the dropped part by
    ``max|u| * sum_{|k| > cutoff} |w_k| / h**alpha``.  ``cutoff`` defaults to
    ``len(u) - 1``, which covers every in-window pair.
    """
    u = np.asarray(u, dtype=float)
    if u.ndim != 1 or u.size == 0:
        raise ShapeError("u must be a non-empty 1-D array")
    if h <= 0.0:
        raise DomainError("h must be positive")
    n = u.size
    M = n - 1 if cutoff is None else int(cutoff)
    if M < 1:
        raise CutoffError(f"cutoff must be >= 1, got {M}")
    supp = _support(u)
    if supp is not None:
        # the window node farthest from the support must still reach it
        margin = max(supp[0], n - 1 - supp[1])
        if M < margin:
            raise CutoffError(f"cutoff {M} is shorter than the window margin {margin}")

    w = riesz_feller_weights(np.arange(-M, M + 1), alpha, theta)
    padded = np.concatenate([np.zeros(M), u, np.zeros(M)])
    out = np.correlate(padded, w, mode="valid") / h**alpha

    # sum_{k > M} w_k = sR at distance M (closed form), same on the left
    if alpha == 2.0:
        tail = 0.0
    else:
        sl, sr = tail_weight_arrays(M + 1, alpha, theta)
        tail = abs(sl[-1]) + abs(sr[0])
    bound = float(np.max(np.abs(u))) * tail / h**alpha
    return UnboundedResult(out, bound, M)


def apply_bounded(C, grid: SpatialGrid, table: WeightTable, gL: float, gR: float) -> np.ndarray:
    """Derivative at the interior nodes i = 1..N-1 of a bounded field.

    Virtual nodes left of x_0 take the value ``gL`` and those right of x_N
    take ``gR``; their contribution enters through the tail sums.
    """
    values = C.values if isinstance(C, FieldState) else np.asarray(C, dtype=float)
    if values.shape != (grid.N + 1,):
        raise ShapeError(f"field has shape {values.shape}, grid needs ({grid.N + 1},)")
    if table.N != grid.N:
        raise ShapeError(f"weight table built for N={table.N}, grid has N={grid.N}")
    inner = table.interior_matrix @ values + gL * table.sL + gR * table.sR
    return inner / grid.h**table.alpha
