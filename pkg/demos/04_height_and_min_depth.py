"""
Height and minimum depth
========================

Full trees are built in one forward pass.  The height approaches its constant
from below, slowly; the minimum depth over the last half of the labels stays
bounded for uniform attachment but grows logarithmically for the max of two.
"""

import math

from sarrt import MaxOrder, Uniform, solve_constants
from sarrt.montecarlo import ExperimentPlan, run_plan

for law in (Uniform(), MaxOrder(2)):
    c = solve_constants(law)
    print(f"{law.spec()}: alpha_max {c.alpha_max:.4f}, alpha_min {c.alpha_min:.4f}")
    rows = run_plan(ExperimentPlan(law, [10**3, 10**4, 10**5], 200, statistics=("height", "min_depth")))
    for r in rows:
        h, m = r.stats["height"], r.stats["min_depth"]
        print(f"  n = {r.n:>7}  H_n/log n {h.ratio:.3f} +- {2 * h.se / math.log(r.n):.3f}"
              f"   M_n/log n {m.ratio:.3f}")
