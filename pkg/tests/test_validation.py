import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from anomdiff.errors import DomainError, ShapeError
from anomdiff.operator import FieldState, SpatialGrid
from anomdiff.validation import (
    TEST_FUNCTIONS,
    classical_theta_step,
    compare_fields,
    diagnostics,
    heat_kernel,
    tail_mass,
    weyl_quadrature_oracle,
)

# closed form of the symmetric operator on exp(-x^2) at x = 0 (Fourier side)
GAUSS_AT_ZERO = {1.25: -1.2637024299289774, 1.5: -1.4464090846320771, 1.75: -1.6868912742455393}


@pytest.mark.parametrize("t,K", [(0.01, 1.0), (0.3, 2.0), (1.0, 0.1)])
def test_heat_kernel_normalised(t, K):
    w = 10 * math.sqrt(2 * K * t)
    x = np.linspace(-w, w, 20001)
    assert np.trapezoid(heat_kernel(x, t, K), x) == pytest.approx(1.0, abs=1e-8)


def test_heat_kernel_peak_and_errors():
    assert heat_kernel(0.0, 1 / (4 * math.pi * 2.0), 2.0) == pytest.approx(1.0, rel=1e-15)
    with pytest.raises(DomainError):
        heat_kernel(0.0, 0.0)
    with pytest.raises(DomainError):
        heat_kernel(0.0, 1.0, -1.0)


@settings(max_examples=50, deadline=None)
@given(st.floats(-3, 3), st.floats(0.01, 2), st.floats(0.1, 5), st.floats(0.2, 5))
def test_heat_kernel_scaling(x, t, K, s):
    assert heat_kernel(x, t, K) == pytest.approx(heat_kernel(x * s, t * s * s, K) * s, rel=1e-12, abs=1e-300)


def test_classical_ftcs_hand_stencil():
    C = np.array([0.0, 1.0, 4.0, 9.0, 16.0])
    out = classical_theta_step(C, 0.25, 1.0, -1.0, 2.0)
    assert list(out) == [-1.0, 1.5, 4.5, 9.5, 2.0]
    with pytest.raises(ShapeError):
        classical_theta_step([1.0, 2.0], 0.1, 1.0, 0.0, 0.0)


@pytest.mark.parametrize("r", [0.5, 10.0, 1000.0])
def test_classical_implicit_bounded(r):
    C = np.random.default_rng(0).uniform(-1, 1, 40)
    C[[0, -1]] = 0.0
    for _ in range(200):
        C = classical_theta_step(C, r, 0.0, 0.0, 0.0)
        assert np.max(np.abs(C)) <= 1.0


def test_classical_cn_second_order_in_time():
    x = np.linspace(0, 1, 41)
    h = x[1]
    C0 = np.sin(np.pi * x)

    def run(nsteps):
        dt = 0.1 / nsteps
        C = C0.copy()
        for _ in range(nsteps):
            C = classical_theta_step(C, dt / h**2, 0.5, 0.0, 0.0)
        return C

    ref = run(1280)
    e1 = np.max(np.abs(run(20) - ref))
    e2 = np.max(np.abs(run(40) - ref))
    assert 3.5 < e1 / e2 < 4.5


def test_oracle_alpha2_is_second_derivative():
    for x in (0.0, 0.3, -1.2):
        assert weyl_quadrature_oracle("gaussian", x, 2.0) == pytest.approx((4 * x * x - 2) * math.exp(-x * x), rel=1e-12)


def test_oracle_constant_is_zero():
    assert weyl_quadrature_oracle("constant", 0.4, 1.5) == 0.0


@pytest.mark.parametrize("alpha", sorted(GAUSS_AT_ZERO))
def test_oracle_gaussian_closed_form(alpha):
    assert weyl_quadrature_oracle("gaussian", 0.0, alpha) == pytest.approx(GAUSS_AT_ZERO[alpha], rel=1e-7)


def test_oracle_other_functions():
    # even functions, theta = 0: the two one-sided integrals agree
    for name in ("sech2", "bump"):
        v = weyl_quadrature_oracle(name, 0.0, 1.5)
        assert v < 0.0
        assert weyl_quadrature_oracle(name, 0.2, 1.5) == pytest.approx(weyl_quadrature_oracle(name, -0.2, 1.5), rel=1e-8)
    # skew flips under reflection
    a = weyl_quadrature_oracle("gaussian", 0.3, 1.4, 0.5)
    b = weyl_quadrature_oracle("gaussian", -0.3, 1.4, -0.5)
    assert a == pytest.approx(b, rel=1e-8)
    with pytest.raises(ValueError):
        weyl_quadrature_oracle("nope", 0.0, 1.5)
    assert set(TEST_FUNCTIONS) >= {"gaussian", "sech2", "bump"}


def test_compare_fields():
    g = SpatialGrid(0.0, 2.0, 20)
    a = np.sin(g.x)
    assert compare_fields(a, a, g) == (0.0, 0.0)
    l2, mx = compare_fields(a + 0.5, FieldState(a), g)
    assert l2 == pytest.approx(0.5 * math.sqrt(2.0), rel=1e-12)
    assert mx == pytest.approx(0.5)
    l2b, mxb = compare_fields(a + 1.0, a, g)
    assert l2b > l2 and mxb > mx
    with pytest.raises(ShapeError):
        compare_fields(np.zeros(3), np.zeros(3), g)


def test_diagnostics():
    g = SpatialGrid(0.0, 1.0, 100)
    c = np.exp(-200 * (g.x - 0.5) ** 2)
    d = diagnostics(c, g)
    assert d.total_mass == pytest.approx(math.sqrt(math.pi / 200), rel=1e-6)
    assert d.center_of_mass == pytest.approx(0.5, abs=1e-12)
    assert d.symmetry_defect <= 1e-15
    assert 0.0 <= d.tail_mass < 1e-6
    assert tail_mass(np.ones(101), g) == pytest.approx(0.5, abs=1e-12)
    shifted = diagnostics(np.exp(-200 * (g.x - 0.3) ** 2), g)
    assert shifted.center_of_mass == pytest.approx(0.3, abs=1e-6)
    assert shifted.symmetry_defect > 0.1
