"""
Typical depth and its fluctuations
==================================

The depth of node n grows like log n / mu.  We trace the path of node n in many
independent uniform trees (lazily, reading only the draws on that path) and
look at the standardized depth.
"""

import math

import numpy as np

from sarrt import Uniform
from sarrt.montecarlo import clt_diagnostics, trial_keys
from sarrt.tree_sim import trace_depths

for n in (10**3, 10**5, 10**7, 10**9):
    d = trace_depths(n, Uniform(), trial_keys(1, n, 10_000))
    c = clt_diagnostics(d, 1.0, 1.0, n)
    print(f"n = {n:>10}  mean/log n {d.mean() / math.log(n):.4f}  "
          f"skew {c.skewness:+.3f}  KS {c.ks:.3f}")

# %%
# The convergence is slow: for uniform attachment the depth of node n is a
# sum of independent Bernoulli(1/i), so its skewness decays only like
# (log n)^(-1/2), and since the depth is an integer its KS distance to any
# continuous law is at least half its largest atom, about 1 / (2 sqrt(2 pi log n)).
for n in (10**3, 10**6, 10**9):
    print(f"n = {n:>10}  lattice KS floor ~ {0.5 / math.sqrt(2 * math.pi * math.log(n)):.3f}")
