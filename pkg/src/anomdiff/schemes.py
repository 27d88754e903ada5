"""Time integration of dC/dt = K * D^alpha_theta C.

Three schemes are provided:

* the explicit update on an (effectively) unbounded window,
  ``explicit_step_pure``;
* the explicit update on [L, R] with Dirichlet data carried by virtual
  nodes, ``explicit_step_bounded``;
* the sigma-weighted scheme (sigma = 1 explicit, sigma = 0 fully implicit),
  ``assemble_system`` + ``assemble_rhs`` + ``sigma_step``.

``simulate``/``run_simulation`` drive a whole run and collect snapshots.
"""

from __future__ import annotations

import logging
import math
import warnings
from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np

from .coeffs import FractionalParams, WeightTable, riesz_feller_weight, riesz_feller_weights
from .errors import ConfigError, ShapeError, StabilityWarning
from .linsolve import LUFactors, lu_factor, lu_solve
from .operator import FieldState, SpatialGrid

logger = logging.getLogger(__name__)

AUTO_DT_FRACTION = 0.9


@dataclass(frozen=True)
class SchemeConfig:
    """sigma in [0, 1]; ``dt=None`` means 0.9 of the explicit bound."""

    sigma: float = 1.0
    dt: float | None = None
    t_end: float = 0.0

    def __post_init__(self):
        if not (0.0 <= self.sigma <= 1.0):
            raise ConfigError(f"sigma must lie in [0, 1], got {self.sigma!r}")
        if self.dt is not None and not (math.isfinite(self.dt) and self.dt > 0.0):
            raise ConfigError(f"dt must be positive, got {self.dt!r}")
        if not (math.isfinite(self.t_end) and self.t_end >= 0.0):
            raise ConfigError(f"t_end must be non-negative, got {self.t_end!r}")


@dataclass(frozen=True)
class BoundaryConditions:
    """Dirichlet data g_L(t), g_R(t)."""

    gL: Callable[[float], float]
    gR: Callable[[float], float]

    @classmethod
    def constant(cls, left: float, right: float | None = None) -> "BoundaryConditions":
        right = left if right is None else right
        return cls(lambda t: left, lambda t: right)

    def at(self, t: float) -> tuple[float, float]:
        return float(self.gL(t)), float(self.gR(t))


@dataclass(frozen=True)
class InitialCondition:
    """c0(x), evaluated on the node array."""

    c0: Callable[[np.ndarray], np.ndarray]

    def sample(self, grid: SpatialGrid) -> np.ndarray:
        return np.asarray(self.c0(grid.x), dtype=float) * np.ones(grid.N + 1)


def max_stable_dt(params: FractionalParams, h: float) -> float:
    """Largest explicit step keeping p_0 = 1 + K dt w_0 / h**alpha positive.

    Equals h**alpha Gamma(4 - alpha) / (K (2**(3 - alpha) - 4)(c_L + c_R)),
    i.e. h**2 / (2 K) at alpha = 2.  This is a positivity condition, not a
    proof of stability.
    """
    if not h > 0.0:
        raise ValueError(f"h must be positive, got {h!r}")
    w0 = riesz_feller_weight(0, params.alpha, params.theta)
    return -(h**params.alpha) / (params.k_alpha * w0)


def _check_explicit_dt(params: FractionalParams, dt: float, h: float) -> str | None:
    bound = max_stable_dt(params, h)
    if dt >= bound:
        msg = f"explicit step dt={dt!r} is not below the positivity bound dt_max={bound!r}"
        warnings.warn(msg, StabilityWarning, stacklevel=3)
        return msg
    return None


def explicit_step_pure(u, params: FractionalParams, dt: float, h: float, cutoff: int | None = None) -> np.ndarray:
    """One explicit step C_i <- sum_k C_{i+k} p_k on a zero-extended window.

    The window keeps its length; samples outside it are taken as zero and
    offsets beyond ``cutoff`` (default: window length - 1) are ignored.
    """
    u = np.asarray(u, dtype=float)
    _check_explicit_dt(params, dt, h)
    M = u.size - 1 if cutoff is None else int(cutoff)
    r = params.k_alpha * dt / h**params.alpha
    p = r * riesz_feller_weights(np.arange(-M, M + 1), params.alpha, params.theta)
    p[M] += 1.0
    padded = np.concatenate([np.zeros(M), u, np.zeros(M)])
    return np.correlate(padded, p, mode="valid")


def _table_for(grid: SpatialGrid, params: FractionalParams, table: WeightTable | None) -> WeightTable:
    if table is None:
        return WeightTable.build(params.alpha, params.theta, grid.N)
    if (table.alpha, table.theta, table.N) != (params.alpha, params.theta, grid.N):
        raise ShapeError("weight table does not match (alpha, theta, N)")
    return table


def _half_step_boundary(bc: BoundaryConditions, dt: float, f: int) -> tuple[float, float]:
    return bc.at(dt * (f + 0.5))


def _rhs_interior(values, table, r, gl, gr, sigma):
    # shared by the explicit update and the sigma-scheme right-hand side
    return values[1:-1] + r * (gl * table.sL + gr * table.sR + sigma * (table.interior_matrix @ values))


def explicit_step_bounded(
    C: FieldState,
    grid: SpatialGrid,
    params: FractionalParams,
    bc: BoundaryConditions,
    dt: float,
    f: int | None = None,
    table: WeightTable | None = None,
) -> FieldState:
    """Explicit step on [L, R]; boundary nodes take g at t = (f + 1/2) dt."""
    C.check_grid(grid)
    table = _table_for(grid, params, table)
    f = C.step if f is None else f
    gl, gr = _half_step_boundary(bc, dt, f)
    r = params.k_alpha * dt / grid.h**params.alpha
    new = np.empty_like(C.values)
    new[0], new[-1] = gl, gr
    new[1:-1] = _rhs_interior(C.values, table, r, gl, gr, 1.0)
    return FieldState(new, (f + 1) * dt, f + 1)


@dataclass(frozen=True)
class SystemMatrix:
    """Matrix A of A C^{f+1} = B with its cached factorization.

    Row i (interior) holds delta_ij + a_{j-i}, a_m = (sigma - 1) K dt w_m / h**alpha;
    rows 0 and N are identity rows.  ``factors`` is None when sigma == 1.
    """

    A: np.ndarray
    factors: LUFactors | None
    sigma: float
    dt: float
    r: float
    table: WeightTable
    grid: SpatialGrid
    params: FractionalParams


def assemble_system(
    grid: SpatialGrid,
    params: FractionalParams,
    sigma: float,
    dt: float,
    table: WeightTable | None = None,
) -> SystemMatrix:
    if not 0.0 <= sigma <= 1.0:
        raise ValueError(f"sigma must lie in [0, 1], got {sigma!r}")
    table = _table_for(grid, params, table)
    r = params.k_alpha * dt / grid.h**params.alpha
    n = grid.N + 1
    A = np.eye(n)
    if sigma < 1.0:
        A[1:-1, :] += (sigma - 1.0) * r * table.interior_matrix
        factors = lu_factor(A)
    else:
        factors = None
    A.setflags(write=False)
    return SystemMatrix(A, factors, sigma, dt, r, table, grid, params)


def assemble_rhs(
    C: FieldState,
    grid: SpatialGrid,
    params: FractionalParams,
    bc: BoundaryConditions,
    sigma: float,
    dt: float,
    f: int | None = None,
    table: WeightTable | None = None,
) -> np.ndarray:
    C.check_grid(grid)
    table = _table_for(grid, params, table)
    f = C.step if f is None else f
    gl, gr = _half_step_boundary(bc, dt, f)
    r = params.k_alpha * dt / grid.h**params.alpha
    b = np.empty(grid.N + 1)
    b[0], b[-1] = gl, gr
    b[1:-1] = _rhs_interior(C.values, table, r, gl, gr, sigma)
    return b


def sigma_step(C: FieldState, system: SystemMatrix, bc: BoundaryConditions, f: int | None = None) -> FieldState:
    """Advance one step of the sigma-scheme using the cached factorization."""
    f = C.step if f is None else f
    b = assemble_rhs(C, system.grid, system.params, bc, system.sigma, system.dt, f, system.table)
    new = b if system.factors is None else lu_solve(system.factors, b)
    return FieldState(new, (f + 1) * system.dt, f + 1)


@dataclass
class SimulationResult:
    grid: SpatialGrid
    params: FractionalParams
    sigma: float
    dt: float
    dt_max: float
    snapshots: list[FieldState]
    requested_times: list[float]
    steps: int
    warnings: list[str] = field(default_factory=list)

    @property
    def times(self) -> list[float]:
        return [s.time for s in self.snapshots]

    def metadata(self) -> dict:
        return {
            "grid": {"L": self.grid.L, "R": self.grid.R, "N": self.grid.N, "h": self.grid.h},
            "params": {"alpha": self.params.alpha, "theta": self.params.theta, "k_alpha": self.params.k_alpha},
            "sigma": self.sigma,
            "dt": self.dt,
            "dt_max": self.dt_max,
            "steps": self.steps,
            "warnings": list(self.warnings),
            "snapshots": [
                {"requested_time": req, "time": s.time, "step": s.step}
                for req, s in zip(self.requested_times, self.snapshots)
            ],
        }


def snapshot_steps(times: Sequence[float], dt: float) -> list[int]:
    return [int(round(t / dt)) for t in times]


def simulate(
    grid: SpatialGrid,
    params: FractionalParams,
    scheme: SchemeConfig,
    ic: InitialCondition | Callable[[np.ndarray], np.ndarray],
    bc: BoundaryConditions,
    snapshots: Sequence[float] = (),
) -> SimulationResult:
    """Run from t = 0 and return the fields at the requested times.

    Snapshot times are rounded to the nearest multiple of dt; the state
    records the actual time.  With no snapshots, the final state at t_end is
    returned.
    """
    if not isinstance(ic, InitialCondition):
        ic = InitialCondition(ic)
    dt_max = max_stable_dt(params, grid.h)
    dt = scheme.dt if scheme.dt is not None else AUTO_DT_FRACTION * dt_max
    times = list(snapshots) if len(snapshots) else [scheme.t_end]
    for a, b in zip(times, times[1:]):
        if not b > a:
            raise ConfigError("snapshot times must be strictly increasing")
    if times[0] < 0.0 or times[-1] > scheme.t_end:
        raise ConfigError(f"snapshot times must lie in [0, t_end={scheme.t_end!r}]")

    notes = []
    if scheme.sigma == 1.0:
        msg = _check_explicit_dt(params, dt, grid.h)
        if msg:
            logger.warning(msg)
            notes.append(msg)

    table = WeightTable.build(params.alpha, params.theta, grid.N)
    system = assemble_system(grid, params, scheme.sigma, dt, table)
    targets = snapshot_steps(times, dt)

    state = FieldState(ic.sample(grid), 0.0, 0)
    out = []
    pending = iter(targets)
    want = next(pending, None)
    while want is not None:
        while want is not None and want == state.step:
            out.append(state)
            want = next(pending, None)
        if want is None:
            break
        if system.factors is None:
            state = explicit_step_bounded(state, grid, params, bc, dt, table=table)
        else:
            state = sigma_step(state, system, bc)
    return SimulationResult(grid, params, scheme.sigma, dt, dt_max, out, list(times), state.step, notes)


def run_simulation(scenario) -> SimulationResult:
    """Run a parsed ``Scenario`` (see ``anomdiff.scenario_io``)."""
    return simulate(
        scenario.grid,
        scenario.params,
        scenario.scheme,
        scenario.initial_condition,
        scenario.boundary_conditions,
        scenario.snapshots,
    )
