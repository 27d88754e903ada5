"""
How accurate is the grid operator?
==================================

The quadrature oracle evaluates the fractional derivative of a Gaussian
straight from its integral definition.  Comparing it with the grid operator
at a few step sizes gives an empirical order of accuracy.
"""

# %%
import numpy as np

from anomdiff import apply_unbounded
from anomdiff.validation import weyl_quadrature_oracle

for alpha in (1.25, 1.5, 1.75):
    ref = weyl_quadrature_oracle("gaussian", 0.0, alpha)
    errs = []
    for h in (0.04, 0.02, 0.01, 0.005):
        n = int(round(9.0 / h))
        x = np.arange(-n, n + 1) * h
        errs.append(abs(apply_unbounded(np.exp(-x * x), alpha, 0.0, h).values[n] - ref))
    orders = np.log2(np.array(errs[:-1]) / np.array(errs[1:]))
    print(f"alpha={alpha}: D u(0) = {ref:.10f}, errors {np.array2string(np.array(errs), precision=2)}, "
          f"observed orders {np.array2string(orders, precision=2)}")
