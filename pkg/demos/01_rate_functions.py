"""
Rate functions of log X
=======================

The height of a scaled attachment tree is governed by the Legendre dual of
the cumulant of log X.  Here we evaluate it numerically and compare with the
closed forms available for the max and min of k uniforms.
"""

import math

import numpy as np

from sarrt import MaxOrder, MinOrder, RateEvaluator, Uniform, psi
from sarrt.rate_function import max_order_dual, min_order_dual

# The uniform law: Lambda(lam) = -log(1 + lam), so Lambda*(z) = -1 - z - log(-z).
ev = RateEvaluator(Uniform())
for z in (-3.0, -1.0, -0.5, -0.1):
    print(f"Lambda*({z:5}) = {ev.legendre_dual(z):.10f}   closed form {max_order_dual(1, z):.10f}")

# The dual vanishes at minus the mean of -log X, here z = -1.
print("Lambda*(-mu) =", ev.legendre_dual(-1.0))

# Psi(c) = c Lambda*(-1/c) crosses 1 at c = e, the uniform height constant.
print("Psi(e) =", psi(ev, math.e))

# %%
# Max of k uniforms has an explicit dual; min of k needs the root of a
# one-dimensional equation.  Both agree with the numeric search.
zs = np.linspace(-2.0, -0.2, 7)
for k in (2, 3):
    num = [RateEvaluator(MaxOrder(k)).legendre_dual(z) for z in zs]
    print(f"max of {k}: largest gap {max(abs(a - max_order_dual(k, z)) for a, z in zip(num, zs)):.1e}")
    num = [RateEvaluator(MinOrder(k)).legendre_dual(z) for z in zs]
    print(f"min of {k}: largest gap {max(abs(a - min_order_dual(k, z)) for a, z in zip(num, zs)):.1e}")
