"""
Depth, height and minimum-depth constants
==========================================

For the max (``+``) and min (``-``) of k uniforms we compute, for k = 1..5,
the constant in front of log n for the minimum depth, the typical depth and
the height.
"""

import time

from sarrt import AtomMixture, Constant, Power, Uniform, solve_constants
from sarrt.constants import format_table1, table1

t0 = time.perf_counter()
rows = table1()
print(format_table1(rows))
print(f"({time.perf_counter() - t0:.3f} s)")

# %%
# Other laws.  A point mass gives a complete m-ary tree, so all three
# constants coincide.  An atom at 0 makes the typical depth sublogarithmic
# while the height stays of order log n.
for law in (Uniform(), Power(2.0), Constant(0.5), AtomMixture(0.25, Uniform())):
    c = solve_constants(law)
    print(f"{law.spec():20s} 1/mu {c.one_over_mu:.4f}  alpha_max {c.alpha_max:.4f}  alpha_min {c.alpha_min:.4f}")
