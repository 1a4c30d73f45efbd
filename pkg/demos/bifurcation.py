"""
Arterial bifurcation
====================

One artery splits into two. With identical daughter vessels the solution
in both must stay identical, and with closed outer ends the total mass
is conserved.
"""

import numpy as np

from relaxnet import build_network, get_preset, simulate, total_mass

for name in ("BloodFlow_1-2_Test1", "BloodFlow_1-2_Test2"):
    cfg = get_preset(name)
    net = build_network(cfg)
    m0 = total_mass(net)
    report = simulate(net, cfg.T)
    a2, a3 = net.canal(2), net.canal(3)
    print(name)
    print(f"  {report.steps} steps; mass {m0:.6f} -> {total_mass(net):.6f} (closed outer ends)")
    print(f"  daughter difference in a: {np.max(np.abs(a2.u1 - a3.u1)):.3e}")
    star = report.monitor[-1]
    print(f"  junction residual {star['j1_residual']:.1e}, mass defect {star['j1_mass_defect']:.1e}")
