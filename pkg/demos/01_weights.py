"""
Discrete weights of the Riesz-Feller operator
=============================================

The fractional derivative on a uniform grid is a weighted sum over *all*
nodes.  This script prints the weights, shows how they move between the
alpha -> 1 and alpha = 2 ends, and checks that they sum to zero.
"""

# %%
# A first table
# -------------
# At alpha = 2 the weights collapse to the familiar 1, -2, 1 stencil.
import numpy as np

from anomdiff import WeightTable, cauchy_limit_weights, riesz_feller_weights

k = np.arange(-4, 5)
for alpha in (2.0, 1.9, 1.5, 1.1):
    print(f"alpha={alpha:<4}", np.array2string(riesz_feller_weights(k, alpha, 0.0), precision=4, suppress_small=True))
print("alpha->1+", np.array2string(cauchy_limit_weights(k), precision=4))

# %%
# Skewness
# --------
# theta tilts the stencil.  At |theta| = 2 - alpha one side vanishes.
for theta in (-0.5, 0.0, 0.25, 0.5):
    print(f"theta={theta:+.2f}", np.array2string(riesz_feller_weights(k, 1.5, theta), precision=4, suppress_small=True))

# %%
# Zero sum and slow decay
# -----------------------
# The weights sum to zero.  They decay like |k|^(-1-alpha), so the partial
# sums close in only like M^(-alpha).
for M in (10, 100, 1000, 10000):
    w = riesz_feller_weights(np.arange(-M, M + 1), 1.5, 0.0)
    print(f"M={M:>6}  sum={w.sum():+.3e}")

# %%
# Tail sums
# ---------
# On a bounded domain the infinitely many nodes beyond each wall are folded
# into two closed-form numbers per node.  Interior weights plus tails sum to 0.
table = WeightTable.build(1.5, 0.0, 20)
for i in (1, 10, 19):
    interior = sum(table.weight(m) for m in range(-i, 20 - i + 1))
    sl, sr = table.tails(i)
    print(f"i={i:>2}  sL={sl:.5f}  sR={sr:.5f}  interior+tails={interior + sl + sr:+.1e}")
