"""
Resting water over a bump
=========================

A lake at rest over a cosine bump stays at rest to the last bit. A small
free-surface perturbation then travels across the virtual junction without
exciting spurious waves.
"""

import numpy as np

from relaxnet import build_network, get_preset, simulate

lake = build_network(get_preset("lake_at_rest"))
report = simulate(lake, 5.0, record=False)
q = max(np.max(np.abs(c.u2)) for c in lake.canals)
w = max(np.max(np.abs(c.u1 + c.ref - 1.0)) for c in lake.canals)
print(f"lake at rest, {report.steps} steps: max|q| = {q:.1e}, max|h + z - 1| = {w:.1e}")

# a step in the bottom exactly at the junction is no harder
step = build_network(get_preset("discontinuous_step"))
simulate(step, 5.0, record=False)
print("bottom step at the junction: max|q| =", max(np.max(np.abs(c.u2)) for c in step.canals))

# perturb the surface by 1e-3 on [1.2, 1.4]
cfg = get_preset("SW_Bottleneck_WB")
net = build_network(cfg)
simulate(net, cfg.T, record=False)
for c in net.canals:
    eta = c.u1 + c.ref - 1.0
    print(f"canal {c.id}: surface anomaly in [{eta.min():+.2e}, {eta.max():+.2e}]")
