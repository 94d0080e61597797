"""
Greedy paths in random k-DAGs
=============================

Every node picks k parents uniformly among earlier nodes.  Following the
smallest parent label gives the same distance as the depth in the tree built
from the min of k uniforms, draw for draw; following the largest matches the
max of k.
"""

import math

from sarrt import MaxOrder, MinOrder, RandomStream, build_depths, build_kdag, greedy_distance
from sarrt.dag_sim import reduction_check

n, k = 10**5, 3
s = RandomStream(7, 0)
dag = build_kdag(n, k, s)
print("R- =", greedy_distance(dag, n, "min_label"), " min-of-k depth =", build_depths(n, MinOrder(k), s).depths[n])
print("R+ =", greedy_distance(dag, n, "max_label"), " max-of-k depth =", build_depths(n, MaxOrder(k), s).depths[n])
print("mismatches over all nodes, 20 trials:", reduction_check(10**4, k, seed=7, trials=20))

# R+ / log n tends to k and R- / log n to 1 / h_k.
h = sum(1 / i for i in range(1, k + 1))
rp = [greedy_distance(build_kdag(n, k, RandomStream(8, t)), n, "max_label") for t in range(200)]
rm = [greedy_distance(build_kdag(n, k, RandomStream(8, t)), n, "min_label") for t in range(200)]
print(f"mean R+/log n {sum(rp) / 200 / math.log(n):.3f} (limit {k}),"
      f" mean R-/log n {sum(rm) / 200 / math.log(n):.3f} (limit {1 / h:.3f})")
