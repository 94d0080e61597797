"""
Pictures of trees with X = U^beta
=================================

Larger beta pushes X toward 0, so more nodes attach near the root.  The same
uniforms drive both drawings.
"""

import sys
from pathlib import Path

from sarrt import Power, RandomStream, RenderSpec, build_depths, render_svg

out = Path(sys.argv[1]) if len(sys.argv) > 1 else Path(".")
for beta in (0.5, 1.0, 3.0):
    t = build_depths(500, Power(beta), RandomStream(3, 0), keep_parents=True)
    path = out / f"tree_beta_{beta}.svg"
    render_svg(t, RenderSpec(), path)
    print(f"beta = {beta}: root degree {int((t.parents[1:] == 0).sum())}, height {t.depths.max()}, wrote {path}")
