"""
The classical limit and the step-size bound
===========================================

At alpha = 2 the solver is ordinary FTCS / Crank-Nicolson.  This script
checks that against an independent tridiagonal solver and against the heat
kernel, then shows what happens on either side of the explicit step bound.
"""

# %%
import math
import warnings

import numpy as np

from anomdiff import BoundaryConditions, FieldState, FractionalParams, SchemeConfig, SpatialGrid
from anomdiff import explicit_step_bounded, max_stable_dt, simulate
from anomdiff.errors import StabilityWarning
from anomdiff.validation import classical_theta_step, compare_fields, heat_kernel

grid = SpatialGrid(0.0, 1.0, 100)
p = FractionalParams(2.0)
zero = BoundaryConditions.constant(0.0)
dt = 0.45 * grid.h**2
s = FieldState(np.sin(np.pi * grid.x))
ref = s.values.copy()
for _ in range(1000):
    s = explicit_step_bounded(s, grid, p, zero, dt)
    ref = classical_theta_step(ref, dt / grid.h**2, 1.0, 0.0, 0.0)
print("max |FFDM - FTCS| after 1000 steps:", np.max(np.abs(s.values - ref)))

# %%
# Against the heat kernel
# -----------------------
# A narrow pulse on a wide domain should spread into the Gaussian kernel,
# with error falling by about 4 when h halves.
prev = None
for h in (0.02, 0.01, 0.005):
    N = 2 * math.ceil(2.53 / h)
    g = SpatialGrid(-N * h / 2, N * h / 2, N)
    pulse = lambda x, h=h: np.where(np.abs(x) < h / 2, 1 / h, 0.0)
    res = simulate(g, p, SchemeConfig(1.0, 0.4 * h * h, 0.05), pulse, zero)
    err = compare_fields(res.snapshots[-1], heat_kernel(g.x, res.snapshots[-1].time), g)[0]
    print(f"h={h}: L2 error {err:.3e}" + ("" if prev is None else f", ratio {prev / err:.2f}"))
    prev = err

# %%
# The explicit bound
# ------------------
# Below dt_max the maximum norm never grows; at twice dt_max it explodes.
for alpha in (2.0, 1.5):
    pa = FractionalParams(alpha)
    bound = max_stable_dt(pa, 0.02)
    g = SpatialGrid(0.0, 1.0, 50)
    for frac in (0.9, 2.0):
        st = FieldState(np.random.default_rng(0).uniform(0, 1, 51))
        with warnings.catch_warnings():
            warnings.simplefilter("ignore", StabilityWarning)
            for n in range(300):
                st = explicit_step_bounded(st, g, pa, zero, frac * bound)
        print(f"alpha={alpha}, dt={frac}*dt_max: max|C| after 300 steps = {np.max(np.abs(st.values)):.3g}")
