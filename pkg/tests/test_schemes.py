import math
import warnings

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from anomdiff.coeffs import FractionalParams, WeightTable, skew_bound
from anomdiff.errors import ConfigError, ShapeError, StabilityWarning
from anomdiff.operator import FieldState, SpatialGrid
from anomdiff.schemes import (
    BoundaryConditions,
    InitialCondition,
    SchemeConfig,
    assemble_rhs,
    assemble_system,
    explicit_step_bounded,
    explicit_step_pure,
    max_stable_dt,
    sigma_step,
    simulate,
)
from anomdiff.validation import classical_theta_step

ZERO_BC = BoundaryConditions.constant(0.0)


@st.composite
def alpha_theta(draw):
    a = draw(st.floats(min_value=1.01, max_value=2.0))
    t = draw(st.floats(min_value=-1.0, max_value=1.0)) * skew_bound(a)
    return a, t


def test_max_stable_dt_values():
    assert max_stable_dt(FractionalParams(2.0), 0.01) == pytest.approx(5e-5, rel=1e-14)
    assert max_stable_dt(FractionalParams(1.5), 0.01) == pytest.approx(8.023278985380968e-4, rel=1e-12)
    ref = 1e-3 * math.gamma(2.5) / ((2**1.5 - 4) * -math.sqrt(2))
    assert max_stable_dt(FractionalParams(1.5), 0.01) == pytest.approx(ref, rel=1e-12)
    assert max_stable_dt(FractionalParams(2.0, 0.0, 4.0), 0.01) == pytest.approx(1.25e-5, rel=1e-14)


@settings(max_examples=50, deadline=None)
@given(alpha_theta(), st.floats(min_value=1e-4, max_value=1.0))
def test_max_stable_dt_scaling(at, h):
    p = FractionalParams(*at)
    d = max_stable_dt(p, h)
    assert d > 0.0
    assert d / max_stable_dt(p, h / 2) == pytest.approx(2**p.alpha, rel=1e-12)


def test_pure_step_zero_and_ftcs():
    p = FractionalParams(2.0)
    h = 0.1
    assert np.array_equal(explicit_step_pure(np.zeros(9), p, 1e-3, h), np.zeros(9))
    rng = np.random.default_rng(1)
    u = rng.standard_normal(20)
    out = explicit_step_pure(u, p, h * h / 4, h)
    ref = u[1:-1] + 0.25 * (u[:-2] - 2 * u[1:-1] + u[2:])
    assert np.allclose(out[1:-1], ref, rtol=0, atol=1e-15)


def test_pure_step_constant_far_from_edge():
    p = FractionalParams(1.5)
    h = 0.01
    dt = 0.5 * max_stable_dt(p, h)
    out = explicit_step_pure(np.full(2001, 2.0), p, dt, h)
    # error at distance d from the edges is bounded by the weight tails beyond d
    assert out[1000] == pytest.approx(2.0, abs=1e-3)
    assert abs(out[1000] - 2.0) < abs(out[0] - 2.0)


def test_pure_step_warns_on_large_dt():
    p = FractionalParams(1.5)
    with pytest.warns(StabilityWarning):
        explicit_step_pure(np.zeros(5), p, 2 * max_stable_dt(p, 0.1), 0.1)


def test_bounded_zero_stays_zero():
    g = SpatialGrid(0.0, 1.0, 20)
    p = FractionalParams(1.3, 0.4)
    dt = 0.5 * max_stable_dt(p, g.h)
    s = FieldState(np.zeros(21))
    for _ in range(50):
        s = explicit_step_bounded(s, g, p, ZERO_BC, dt)
    assert np.array_equal(s.values, np.zeros(21))
    assert s.step == 50 and s.time == pytest.approx(50 * dt)


def test_half_step_boundary_sampling():
    g = SpatialGrid(0.0, 1.0, 10)
    p = FractionalParams(1.5)
    bc = BoundaryConditions(lambda t: t, lambda t: 2 * t)
    s = explicit_step_bounded(FieldState(np.zeros(11)), g, p, bc, 0.001, f=3)
    assert s.values[0] == pytest.approx(0.0035)
    assert s.values[-1] == pytest.approx(0.007)


def test_ftcs_equivalence_1000_steps():
    N = 100
    g = SpatialGrid(0.0, 1.0, N)
    p = FractionalParams(2.0)
    dt = 0.4 * g.h**2
    C0 = np.sin(np.pi * g.x) + 0.3 * np.sin(5 * np.pi * g.x)
    s = FieldState(C0.copy())
    ref = C0.copy()
    worst = 0.0
    for _ in range(1000):
        s = explicit_step_bounded(s, g, p, ZERO_BC, dt)
        ref = classical_theta_step(ref, dt / g.h**2, 1.0, 0.0, 0.0)
        worst = max(worst, np.max(np.abs(s.values - ref)))
    assert worst <= 1e-12


@pytest.mark.parametrize("sigma", [0.0, 0.5, 1.0])
def test_sigma_scheme_matches_classical(sigma):
    N = 50
    g = SpatialGrid(0.0, 1.0, N)
    p = FractionalParams(2.0)
    dt = 2.0 * g.h**2 if sigma < 1 else 0.45 * g.h**2
    bc = BoundaryConditions.constant(1.0, 3.0)
    system = assemble_system(g, p, sigma, dt)
    rng = np.random.default_rng(5)
    C = rng.uniform(0, 2, N + 1)
    for _ in range(20):
        nxt = sigma_step(FieldState(C), system, bc)
        ref = classical_theta_step(C, dt / g.h**2, sigma, 1.0, 3.0)
        assert np.max(np.abs(nxt.values - ref)) <= 1e-12
        C = nxt.values


def test_system_matrix_structure():
    g = SpatialGrid(0.0, 1.0, 10)
    p = FractionalParams(2.0)
    dt, r = 1e-3, 1e-3 / 0.01
    A = assemble_system(g, p, 0.0, dt).A
    assert A[0, 0] == 1.0 and A[-1, -1] == 1.0
    assert np.count_nonzero(A[0]) == 1 and np.count_nonzero(A[-1]) == 1
    i = 4
    assert A[i, i] == pytest.approx(1 + 2 * r)
    assert A[i, i - 1] == pytest.approx(-r) and A[i, i + 1] == pytest.approx(-r)
    assert np.count_nonzero(A[i]) == 3
    ident = assemble_system(g, FractionalParams(1.5), 1.0, dt)
    assert np.array_equal(ident.A, np.eye(11)) and ident.factors is None


def test_system_row_sums_against_tails():
    N = 40
    g = SpatialGrid(0.0, 1.0, N)
    p = FractionalParams(1.6, 0.2)
    sigma, dt = 0.3, 1e-3
    sysm = assemble_system(g, p, sigma, dt)
    tab = WeightTable.build(1.6, 0.2, N)
    a = (sigma - 1) * dt / g.h**1.6
    sums = sysm.A[1:-1].sum(axis=1)
    assert np.allclose(sums, 1 - a * (tab.sL + tab.sR), rtol=1e-12, atol=1e-12)


def test_rhs_sigma0_zero_bc_is_field():
    g = SpatialGrid(0.0, 1.0, 10)
    C = FieldState(np.linspace(0, 1, 11))
    b = assemble_rhs(C, g, FractionalParams(1.5), ZERO_BC, 0.0, 1e-3)
    assert np.array_equal(b[1:-1], C.values[1:-1])
    assert b[0] == 0.0 and b[-1] == 0.0
    with pytest.raises(ShapeError):
        assemble_rhs(FieldState(np.zeros(5)), g, FractionalParams(1.5), ZERO_BC, 0.0, 1e-3)


@settings(max_examples=30, deadline=None)
@given(alpha_theta(), st.floats(0.1, 0.95), st.integers(0, 2**31))
def test_sigma1_equals_explicit(at, frac, seed):
    p = FractionalParams(*at)
    g = SpatialGrid(0.0, 2.0, 30)
    dt = frac * max_stable_dt(p, g.h)
    bc = BoundaryConditions(lambda t: 1 + t, lambda t: 2 - t)
    C = FieldState(np.random.default_rng(seed).uniform(0, 1, 31))
    a = sigma_step(C, assemble_system(g, p, 1.0, dt), bc)
    b = explicit_step_bounded(C, g, p, bc, dt)
    assert np.max(np.abs(a.values - b.values)) <= 1e-12


@settings(max_examples=20, deadline=None)
@given(alpha_theta(), st.floats(-3, 3), st.floats(-3, 3), st.floats(0.0, 1.0))
def test_step_linearity(at, a, b, sigma):
    p = FractionalParams(*at)
    g = SpatialGrid(0.0, 1.0, 25)
    dt = 0.5 * max_stable_dt(p, g.h)
    rng = np.random.default_rng(2)
    u, v = rng.standard_normal(26), rng.standard_normal(26)
    u[[0, -1]] = v[[0, -1]] = 0.0
    sysm = assemble_system(g, p, sigma, dt)
    step = lambda c: sigma_step(FieldState(c), sysm, ZERO_BC).values
    lhs = step(a * u + b * v)
    rhs = a * step(u) + b * step(v)
    assert np.allclose(lhs, rhs, rtol=1e-12, atol=1e-12 * (abs(a) + abs(b) + 1))


@settings(max_examples=25, deadline=None)
@given(alpha_theta(), st.integers(0, 2**31))
def test_discrete_maximum_principle(at, seed):
    p = FractionalParams(*at)
    g = SpatialGrid(0.0, 1.0, 30)
    dt = 0.9 * max_stable_dt(p, g.h)
    tab = WeightTable.build(p.alpha, p.theta, 30)
    r = dt / g.h**p.alpha
    coeffs = r * tab.w
    coeffs[tab.N] += 1.0
    if np.any(coeffs < 0):
        return  # the principle only applies when every p_k >= 0
    rng = np.random.default_rng(seed)
    bc = BoundaryConditions.constant(rng.uniform(-1, 1), rng.uniform(-1, 1))
    s = FieldState(rng.uniform(-1, 1, 31))
    for f in range(10):
        gl, gr = bc.at(0.0)
        lo = min(s.values.min(), gl, gr)
        hi = max(s.values.max(), gl, gr)
        s = explicit_step_bounded(s, g, p, bc, dt)
        assert np.all(s.values[1:-1] >= lo - 1e-12) and np.all(s.values[1:-1] <= hi + 1e-12)


@pytest.mark.parametrize("sigma", [1.0, 0.5, 0.0])
def test_symmetry_preserved(sigma):
    g = SpatialGrid(0.0, 1.0, 60)
    p = FractionalParams(1.4)
    res = simulate(
        g, p, SchemeConfig(sigma, None, 0.05),
        lambda x: np.exp(-200 * (x - 0.5) ** 2), BoundaryConditions.constant(0.5),
        snapshots=[0.01, 0.05],
    )
    for s in res.snapshots:
        assert np.max(np.abs(s.values - s.values[::-1])) <= 1e-10


def test_stability_dichotomy_alpha2():
    g = SpatialGrid(0.0, 1.0, 50)
    p = FractionalParams(2.0)
    dmax = max_stable_dt(p, g.h)
    C0 = np.random.default_rng(0).uniform(0, 1, 51)
    C0[[0, -1]] = 0.0
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", StabilityWarning)
        s = FieldState(C0.copy())
        for _ in range(10_000):
            s = explicit_step_bounded(s, g, p, ZERO_BC, 0.99 * dmax)
        assert np.max(np.abs(s.values)) <= np.max(np.abs(C0))
        s = FieldState(C0.copy())
        grew = False
        for _ in range(1000):
            s = explicit_step_bounded(s, g, p, ZERO_BC, 2 * dmax)
            if np.max(np.abs(s.values)) > 1e6:
                grew = True
                break
        assert grew


def test_implicit_robustness_bounded_by_data():
    g = SpatialGrid(0.0, 1.0, 100)
    p = FractionalParams(1.5)
    dt = 100 * max_stable_dt(p, g.h)
    ic = lambda x: np.where(np.abs(x - 0.5) < 0.05, 1.0, 0.0)
    sysm = assemble_system(g, p, 0.0, dt)
    s = FieldState(ic(g.x))
    for _ in range(1000):
        s = sigma_step(s, sysm, ZERO_BC)
        assert np.max(np.abs(s.values)) <= 1.0 + 1e-6


def test_solve_residual():
    g = SpatialGrid(0.0, 1.0, 60)
    p = FractionalParams(1.7, -0.2)
    sysm = assemble_system(g, p, 0.25, 0.01)
    C = FieldState(np.random.default_rng(4).uniform(0, 1, 61))
    b = assemble_rhs(C, g, p, BoundaryConditions.constant(1.0, 0.0), 0.25, 0.01)
    nxt = sigma_step(C, sysm, BoundaryConditions.constant(1.0, 0.0))
    assert np.max(np.abs(sysm.A @ nxt.values - b)) <= 1e-10 * np.max(np.abs(b))


def test_constant_boundary_fill_monotone():
    g = SpatialGrid(0.0, 1.0, 50)
    p = FractionalParams(1.5)
    dt = 0.9 * max_stable_dt(p, g.h)
    bc = BoundaryConditions.constant(100.0)
    s = FieldState(np.zeros(51))
    prev = s.values
    for _ in range(400):
        s = explicit_step_bounded(s, g, p, bc, dt)
        assert np.all(s.values >= -1e-12) and np.all(s.values <= 100 + 1e-9)
        assert np.all(s.values >= prev - 1e-9)
        prev = s.values
    # fine-step reference ends close to the same state
    fine = simulate(g, p, SchemeConfig(1.0, dt / 4, 400 * dt), lambda x: 0 * x, bc).snapshots[-1]
    assert np.max(np.abs(fine.values - s.values)) < 1.0


def test_simulate_defaults_and_snapshots():
    g = SpatialGrid(0.0, 1.0, 20)
    p = FractionalParams(1.5)
    res = simulate(g, p, SchemeConfig(t_end=0.0), InitialCondition(lambda x: x), ZERO_BC)
    assert res.steps == 0 and len(res.snapshots) == 1
    assert np.array_equal(res.snapshots[0].values, g.x)
    assert res.dt == pytest.approx(0.9 * res.dt_max)
    res = simulate(g, p, SchemeConfig(1.0, 1e-3, 0.01), lambda x: 0 * x, ZERO_BC, snapshots=[0.0, 0.0024, 0.01])
    assert [s.step for s in res.snapshots] == [0, 2, 10]
    assert res.times[1] == pytest.approx(0.002)
    assert res.steps == 10
    assert res.metadata()["snapshots"][1]["requested_time"] == 0.0024
    with pytest.raises(ConfigError):
        simulate(g, p, SchemeConfig(1.0, 1e-3, 0.01), lambda x: 0 * x, ZERO_BC, snapshots=[0.005, 0.002])
    with pytest.raises(ConfigError):
        simulate(g, p, SchemeConfig(1.0, 1e-3, 0.01), lambda x: 0 * x, ZERO_BC, snapshots=[0.02])


def test_simulate_records_warning():
    g = SpatialGrid(0.0, 1.0, 20)
    p = FractionalParams(1.5)
    big = 1.5 * max_stable_dt(p, g.h)
    with pytest.warns(StabilityWarning):
        res = simulate(g, p, SchemeConfig(1.0, big, big), lambda x: 0 * x, ZERO_BC)
    assert res.warnings and "dt_max" in res.warnings[0]
    res = simulate(g, p, SchemeConfig(0.0, big, big), lambda x: 0 * x, ZERO_BC)
    assert res.warnings == []


def test_scheme_config_validation():
    for kw in [dict(sigma=1.5), dict(sigma=-0.1), dict(dt=0.0), dict(dt=float("nan")), dict(t_end=-1.0)]:
        with pytest.raises(ConfigError):
            SchemeConfig(**kw)
