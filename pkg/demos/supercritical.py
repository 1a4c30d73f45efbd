"""
Torrential flow through junctions
=================================

The kinetic junction conditions need no regime switch. Here the left state
is supercritical, and in the last case every canal of a 1-to-2 junction is.
The classical Lax-curve strategy refuses such data.
"""

import numpy as np

from relaxnet import build_network, get_preset, simulate
from relaxnet.riemann import RegimeError

for name in ("SW_Bottleneck_FT", "SW_Bottleneck_FT2", "SW_1-2_Test7"):
    cfg = get_preset(name)
    net = build_network(cfg)
    report = simulate(net, cfg.T)
    fr = [float(np.max(report.final().field(c.id, "Fr"))) for c in net.canals]
    print(f"{name}: {report.steps} steps, max Froude per canal {np.round(fr, 3)}")

    try:
        simulate(build_network(cfg.with_overrides(strategy="classical")), cfg.T)
        print("  classical strategy: completed")
    except RegimeError as exc:
        print(f"  classical strategy: {exc}")

# the incoming canal of the last case keeps its state except next to the junction
c = net.canal(1)
dev = np.abs(c.u1 - 0.25)[::-1]
print("incoming deviation, cells counted from the junction:", " ".join(f"{d:.1e}" for d in dev[:14]))
