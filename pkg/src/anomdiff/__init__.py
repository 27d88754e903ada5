"""Finite-difference solver for the space-fractional (Riesz-Feller) diffusion equation.

    dC/dt = K * d^alpha C / d|x|^alpha,    1 < alpha <= 2,

on a bounded interval with Dirichlet data, explicit and sigma-weighted
implicit time stepping.
"""

from .coeffs import (
    FractionalParams,
    WeightTable,
    cauchy_limit_weight,
    cauchy_limit_weights,
    feller_pair,
    p_coefficient,
    riesz_feller_weight,
    riesz_feller_weights,
    tail_weights,
    weyl_trapezoid_weight,
)
from .errors import (
    AnomDiffError,
    ConfigError,
    ConvergenceError,
    CutoffError,
    DomainError,
    ShapeError,
    SingularMatrixError,
    SkewError,
    StabilityWarning,
)
from .linsolve import LUFactors, lu_factor, lu_solve
from .operator import FieldState, SpatialGrid, apply_bounded, apply_unbounded
from .schemes import (
    BoundaryConditions,
    InitialCondition,
    SchemeConfig,
    SimulationResult,
    assemble_rhs,
    assemble_system,
    explicit_step_bounded,
    explicit_step_pure,
    max_stable_dt,
    run_simulation,
    sigma_step,
    simulate,
)
from .scenario_io import Scenario, load_scenario, parse_scenario, run_scenario, serialize_scenario

__version__ = "0.1.0"
